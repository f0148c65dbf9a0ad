#include "dmb/bregman.hpp"

namespace dmb {

BregmanGenerator BregmanGenerator::make_euclidean() {
  BregmanGenerator g;
  g.value = [](const Vector& w) { return 0.5 * norm_sq(w); };
  g.gradient = [](const Vector& w) { return w; };
  g.gradient_inverse = [](const Vector& s) { return s; };
  g.euclidean = true;
  return g;
}

BregmanGenerator BregmanGenerator::diagonal_quadratic(Vector diag) {
  for (double a : diag) {
    if (!(a >= 1.0)) throw InputError("diagonal generator needs entries >= 1");
  }
  BregmanGenerator g;
  g.value = [diag](const Vector& w) {
    require_same_dim(w, diag);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += diag[i] * w[i] * w[i];
    return 0.5 * s;
  };
  g.gradient = [diag](const Vector& w) {
    require_same_dim(w, diag);
    Vector r(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) r[i] = diag[i] * w[i];
    return r;
  };
  g.gradient_inverse = [diag](const Vector& s) {
    require_same_dim(s, diag);
    Vector r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) r[i] = s[i] / diag[i];
    return r;
  };
  g.euclidean = false;
  return g;
}

double bregman(const BregmanGenerator& gen, const Vector& u, const Vector& v) {
  require_same_dim(u, v);
  const Vector gv = gen.gradient(v);
  double inner = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) inner += gv[i] * (u[i] - v[i]);
  return gen.value(u) - gen.value(v) - inner;
}

}  // namespace dmb
