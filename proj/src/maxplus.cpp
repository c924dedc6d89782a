#include "mplv/maxplus.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>

namespace mplv {

Ticks MaxPlus::value() const {
  if (!finite_) throw InternalError("value() called on ε");
  return value_;
}

MaxPlus oplus(MaxPlus a, MaxPlus b) {
  if (a.is_epsilon()) return b;
  if (b.is_epsilon()) return a;
  return a.value() >= b.value() ? a : b;
}

MaxPlus otimes(MaxPlus a, MaxPlus b) {
  if (a.is_epsilon() || b.is_epsilon()) return MaxPlus::epsilon();
  return MaxPlus::finite(checked_add(a.value(), b.value()));
}

Matrix Matrix::from_units(const std::vector<std::vector<std::optional<double>>>& rows, Scale scale) {
  Matrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw Error("matrix is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[i][j]) m(i, j) = MaxPlus::finite(to_ticks(*rows[i][j], scale));
    }
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = MaxPlus::finite(0);
  return m;
}

std::vector<std::size_t> Matrix::finite_columns(std::size_t i) const {
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < n_; ++j) {
    if ((*this)(i, j).is_finite()) cols.push_back(j);
  }
  return cols;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw Error("matrix dimension mismatch in max-plus product");
  const std::size_t n = a.dim();
  Matrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const MaxPlus aik = a(i, k);
      if (aik.is_epsilon()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        r(i, j) = oplus(r(i, j), otimes(aik, b(k, j)));
      }
    }
  }
  return r;
}

Matrix power(const Matrix& a, std::size_t r) {
  if (r == 0) return Matrix::identity(a.dim());
  Matrix result = a;
  for (std::size_t i = 1; i < r; ++i) result = multiply(result, a);
  return result;
}

Matrix shift(const Matrix& a, Ticks delta) {
  Matrix r = a;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (r(i, j).is_finite()) r(i, j) = MaxPlus::finite(checked_add(r(i, j).value(), delta));
    }
  }
  return r;
}

Point mat_vec(const Matrix& a, std::span<const Ticks> x) {
  if (x.size() != a.dim()) throw Error("vector dimension does not match matrix");
  Point out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    MaxPlus acc;
    for (std::size_t j = 0; j < a.dim(); ++j) acc = oplus(acc, otimes(a(i, j), MaxPlus::finite(x[j])));
    if (acc.is_epsilon()) throw Error("matrix is not regular: row " + std::to_string(i + 1) + " has no finite entry");
    out[i] = acc.value();
  }
  return out;
}

bool is_regular(const Matrix& a) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.finite_columns(i).empty()) return false;
  }
  return true;
}

namespace {

// Tarjan's algorithm on the precedence graph (edge j -> i when A(i,j) finite).
std::size_t count_components(const Matrix& a) {
  const std::size_t n = a.dim();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0, components = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (a(w, v).is_epsilon()) continue;  // edge v -> w
      if (index[w] == kUnvisited) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      ++components;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
      } while (w != v);
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == kUnvisited) visit(v);
  }
  return components;
}

}  // namespace

bool is_irreducible(const Matrix& a) {
  if (a.dim() == 0) return false;
  if (a.dim() == 1) return a(0, 0).is_finite();
  return count_components(a) == 1;
}

Rational eigenvalue(const Matrix& a) {
  if (!is_irreducible(a)) throw Error("eigenvalue requires an irreducible matrix");
  const std::size_t n = a.dim();
  // walk[k][v]: heaviest walk of exactly k edges from node 0 to v.
  std::vector<std::vector<MaxPlus>> walk(n + 1, std::vector<MaxPlus>(n));
  walk[0][0] = MaxPlus::finite(0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t v = 0; v < n; ++v) {
      MaxPlus best;
      for (std::size_t u = 0; u < n; ++u) best = oplus(best, otimes(walk[k - 1][u], a(v, u)));
      walk[k][v] = best;
    }
  }
  std::optional<Rational> lambda;
  for (std::size_t v = 0; v < n; ++v) {
    if (walk[n][v].is_epsilon()) continue;
    std::optional<Rational> worst;
    for (std::size_t k = 0; k < n; ++k) {
      if (walk[k][v].is_epsilon()) continue;
      const Rational mean(checked_sub(walk[n][v].value(), walk[k][v].value()), static_cast<Ticks>(n - k));
      if (!worst || mean < *worst) worst = mean;
    }
    if (worst && (!lambda || *worst > *lambda)) lambda = worst;
  }
  if (!lambda) throw InternalError("no circuit found in an irreducible matrix");
  return *lambda;
}

bool transient_identity_holds(const Matrix& a_k, const Matrix& a_k_plus_c, const Rational& lambda, std::size_t c) {
  const __int128 scaled = static_cast<__int128>(lambda.num()) * static_cast<__int128>(c);
  if (scaled % lambda.den() != 0) return false;  // λc is not a whole number of ticks
  const __int128 delta = scaled / lambda.den();
  if (delta > std::numeric_limits<Ticks>::max() || delta < std::numeric_limits<Ticks>::min()) return false;
  const std::size_t n = a_k.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const MaxPlus lhs = a_k_plus_c(i, j);
      const MaxPlus base = a_k(i, j);
      if (lhs.is_finite() != base.is_finite()) return false;
      if (lhs.is_finite() && lhs.value() != checked_add(base.value(), static_cast<Ticks>(delta))) return false;
    }
  }
  return true;
}

SpectralProfile transient_cyclicity(const Matrix& a, TransientLimits limits) {
  const Rational lambda = eigenvalue(a);
  // window[d] holds A^(k+d) for the current k.
  std::deque<Matrix> window;
  window.push_back(a);
  while (window.size() <= limits.max_cyclicity) window.push_back(multiply(window.back(), a));
  for (std::size_t k = 1; k <= limits.max_transient; ++k) {
    for (std::size_t c = 1; c <= limits.max_cyclicity; ++c) {
      if (transient_identity_holds(window[0], window[c], lambda, c)) return {lambda, k, c};
    }
    window.pop_front();
    window.push_back(multiply(window.back(), a));
  }
  throw Error("transient search exceeded limits (transient <= " + std::to_string(limits.max_transient) +
              ", cyclicity <= " + std::to_string(limits.max_cyclicity) + ")");
}

}  // namespace mplv
