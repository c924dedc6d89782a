#include "mplv/bench.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

namespace mplv {

std::uint64_t trial_seed(std::uint64_t seed, std::size_t n, std::size_t trial) {
  return seed + 1'000'003ULL * n + trial;
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t micros_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0).count();
}

}  // namespace

AbstractionReport bench_abstraction(const BenchConfig& config) {
  AbstractionReport report;
  for (std::size_t n : config.dims) {
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      const std::uint64_t seed = trial_seed(config.seed, n, trial);
      const Matrix a = random_mpl(n, config.random, seed);
      const auto start = Clock::now();
      auto t0 = Clock::now();
      const MatrixPredicates mp = predicates_from_matrix(a);
      const auto t_pred = micros_since(t0);
      t0 = Clock::now();
      auto cells = generate_abstract_states(mp.predicates, n);
      const auto t_states = micros_since(t0);
      t0 = Clock::now();
      std::size_t checksum = 0;
      for (const auto& cell : cells) {
        checksum += affine_dynamics_for_state(a, cell.valuation, mp.predicates, mp.by_row).g[0];
      }
      const auto t_dyn = micros_since(t0);
      const auto total = micros_since(start);
      (void)checksum;
      for (auto [phase, us] : {std::pair<const char*, std::int64_t>{"predicates", t_pred},
                               {"states", t_states}, {"dynamics", t_dyn}, {"total", total}}) {
        report.samples.push_back({n, trial, seed, phase, us});
      }
    }
  }
  return report;
}

std::string AbstractionReport::csv() const {
  std::ostringstream out;
  out << "n,trial,seed,phase,micros\n";
  for (const auto& s : samples) out << s.n << ',' << s.trial << ',' << s.seed << ',' << s.phase << ',' << s.micros << '\n';
  return out.str();
}

std::string AbstractionReport::table() const {
  std::map<std::size_t, std::vector<std::int64_t>> totals;
  for (const auto& s : samples) {
    if (s.phase == "total") totals[s.n].push_back(s.micros);
  }
  std::ostringstream out;
  out << "n\ttrials\tavg_ms\tmax_ms\n";
  for (const auto& [n, v] : totals) {
    std::int64_t sum = 0;
    for (auto t : v) sum += t;
    const double avg = static_cast<double>(sum) / static_cast<double>(v.size()) / 1000.0;
    const double mx = static_cast<double>(*std::max_element(v.begin(), v.end())) / 1000.0;
    out << n << '\t' << v.size() << '\t' << avg << '\t' << mx << '\n';
  }
  return out.str();
}

CtReport bench_ct(const BenchConfig& config, const std::string& spec) {
  const ltl::Formula phi = ltl::parse(spec);
  CtReport report;
  for (std::size_t n : config.dims) {
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      const std::uint64_t seed = trial_seed(config.seed, n, trial);
      std::mt19937_64 rng(seed);
      Matrix a;
      for (int attempt = 0;; ++attempt) {
        if (attempt == 100000) throw Error("no irreducible sample for n = " + std::to_string(n));
        a = random_mpl(n, config.random, rng);
        if (is_irreducible(a)) break;
      }
      const SpectralProfile sp = transient_cyclicity(a);
      const Verdict v = verify(a, std::nullopt, phi);
      std::size_t ct1 = 0;
      if (v.abstraction) {
        ct1 = empirical_threshold(*v.abstraction, v.abstraction->initial_set());
      } else {
        const auto ts = build_abstraction(a, ltl::atoms(direct_check(a, phi).residual));
        ct1 = empirical_threshold(ts, ts.initial_set());
      }
      CtSample s{n, trial, seed, ct1, sp.transient + sp.cyclicity, v.outcome};
      if (s.ct_empirical < s.ct_lemma) ++report.less;
      else if (s.ct_empirical == s.ct_lemma) ++report.equal;
      else ++report.greater;
      report.samples.push_back(s);
    }
  }
  return report;
}

std::string CtReport::csv() const {
  std::ostringstream out;
  out << "n,trial,seed,ct_empirical,ct_lemma,verdict\n";
  for (const auto& s : samples) {
    out << s.n << ',' << s.trial << ',' << s.seed << ',' << s.ct_empirical << ',' << s.ct_lemma << ','
        << to_string(s.verdict) << '\n';
  }
  return out.str();
}

std::string CtReport::table() const {
  std::ostringstream out;
  out << "ct_empirical < ct_lemma: " << less << "\n";
  out << "ct_empirical = ct_lemma: " << equal << "\n";
  out << "ct_empirical > ct_lemma: " << greater << "\n";
  return out.str();
}

}  // namespace mplv
