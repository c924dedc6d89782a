#pragma once

// Model files: JSON with "matrix" (null for ε), optional "initial" (list of
// `x<i> - x<j> <op> <c>` strings, absent = all of R^n) and optional "spec".

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mplv/dbm.hpp"
#include "mplv/maxplus.hpp"

namespace mplv {

struct Model {
  Matrix matrix;
  std::optional<Dbm> initial;
  std::optional<std::string> spec;

  friend bool operator==(const Model&, const Model&) = default;
};

Model parse_model(std::string_view json_text, Scale scale = {});
Model load_model(const std::string& path, Scale scale = {});
std::string save_model(const Model& model, Scale scale = {});
void write_model(const std::string& path, const Model& model, Scale scale = {});

// Conjoins one constraint (ops <, <=, >, >=, =) into d.
void add_constraint(Dbm& d, std::string_view text, Scale scale = {});
// Canonical DBM of a list of constraints; throws when it is empty.
Dbm parse_constraints(const std::vector<std::string>& lines, std::size_t n, Scale scale = {});

struct RandomConfig {
  std::size_t finite_per_row = 2;
  std::int64_t lo = 1;  // whole units
  std::int64_t hi = 10;
};

Matrix random_mpl(std::size_t n, const RandomConfig& config, std::mt19937_64& rng, Scale scale = {});
Matrix random_mpl(std::size_t n, const RandomConfig& config, std::uint64_t seed, Scale scale = {});

// MPLVERIFY_SEED when set, else a fixed default.
std::uint64_t default_seed();

}  // namespace mplv
