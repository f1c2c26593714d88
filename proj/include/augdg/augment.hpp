#pragma once

#include <optional>
#include <random>
#include <sstream>

#include "json.hpp"

#include "augdg/explicit_psi.hpp"
#include "augdg/nlp.hpp"
#include "augdg/test_function.hpp"

namespace augdg {

enum class Provenance { Optimized, ExplicitTable };

/// One extra basis function psi in X_r \ X_k together with the coefficient
/// vector d over the ansatz basis and the regime it was built for.
struct AugmentedBasis {
  SpaceSpec base;
  int r = 0;
  SpaceFamily ansatz_family = SpaceFamily::Q;
  std::vector<double> d;
  Poly psi;
  Provenance provenance = Provenance::Optimized;
  std::optional<Regime> regime;
};

/// L2 distance of psi from the base space, relative to ||psi||; an
/// augmented basis must keep this above 1e-10.
inline double relative_residual_outside(const BasisSet& base, const Poly& psi) {
  const int n = base.size();
  Mat gram(n, n);
  std::vector<double> b(n);
  for (int i = 0; i < n; ++i) {
    b[i] = base.fn[i].inner(psi);
    for (int j = 0; j < n; ++j) gram(i, j) = base.fn[i].inner(base.fn[j]);
  }
  const auto c = solve_dense(gram, b).x;
  double proj2 = 0.0;
  for (int i = 0; i < n; ++i) proj2 += c[i] * b[i];
  const double norm2 = psi.inner(psi);
  const double res2 = std::max(0.0, norm2 - proj2);
  return norm2 > 0.0 ? std::sqrt(res2 / norm2) : 0.0;
}

inline std::shared_ptr<const BasisSet> make_augmented_space(const BasisSet& base,
                                                            const Poly& psi) {
  if (relative_residual_outside(base, psi) <= 1e-10)
    throw std::invalid_argument("augmented function lies in the base space");
  auto s = std::make_shared<BasisSet>();
  s->spec = base.spec;
  s->fn = base.fn;
  s->fn.push_back(psi);
  s->finalize();
  return s;
}

/// Wrap a published psi as an AugmentedBasis; d is stored over the tensor
/// monomial basis Q_r with r = the per-axis degree of psi.
inline AugmentedBasis explicit_table_basis(SpaceFamily family, int k, Regime regime) {
  AugmentedBasis ab;
  ab.base = SpaceSpec{family, k, 2};
  ab.psi = explicit_psi(family, k, regime);
  ab.r = ab.psi.max_axis_degree();
  ab.ansatz_family = SpaceFamily::Q;
  ab.provenance = Provenance::ExplicitTable;
  ab.regime = regime;
  const auto container = build_basis(SpaceSpec{SpaceFamily::Q, ab.r, 2});
  ab.d.assign(container->size(), 0.0);
  for (int i = 0; i < container->size(); ++i) {
    // each container function is a single monomial with unit coefficient
    const auto& ext = container->fn[i].extents();
    int e0 = -1, e1 = -1;
    for (int a0 = 0; a0 < ext[0]; ++a0)
      for (int a1 = 0; a1 < ext[1]; ++a1)
        if (container->fn[i].at(a0, a1, 0) != 0.0) {
          e0 = a0;
          e1 = a1;
        }
    if (e0 <= ab.psi.degree(0) && e1 <= ab.psi.degree(1)) ab.d[i] = ab.psi.at(e0, e1, 0);
  }
  return ab;
}

inline nlohmann::json to_json(const AugmentedBasis& ab) {
  nlohmann::json j;
  j["family"] = std::string(1, family_letter(ab.base.family));
  j["k"] = ab.base.k;
  j["r"] = ab.r;
  j["dim"] = ab.base.dim;
  j["ansatz_family"] = std::string(1, family_letter(ab.ansatz_family));
  j["regime"] = ab.regime ? nlohmann::json(regime_name(*ab.regime)) : nlohmann::json(nullptr);
  j["d"] = ab.d;
  j["provenance"] = ab.provenance == Provenance::Optimized ? "optimized" : "explicit-table";
  return j;
}

inline AugmentedBasis augmented_basis_from_json(const nlohmann::json& j) {
  AugmentedBasis ab;
  ab.base.family = family_from_letter(j.at("family").get<std::string>().at(0));
  ab.base.k = j.at("k").get<int>();
  ab.base.dim = j.value("dim", 2);
  ab.r = j.at("r").get<int>();
  ab.ansatz_family = family_from_letter(j.at("ansatz_family").get<std::string>().at(0));
  ab.d = j.at("d").get<std::vector<double>>();
  const std::string prov = j.at("provenance").get<std::string>();
  ab.provenance = prov == "optimized" ? Provenance::Optimized : Provenance::ExplicitTable;
  if (!j.at("regime").is_null())
    ab.regime = j.at("regime").get<std::string>() == "low_B" ? Regime::LowB : Regime::HighB;
  const auto container = build_basis(SpaceSpec{ab.ansatz_family, ab.r, ab.base.dim});
  if (static_cast<int>(ab.d.size()) != container->size())
    throw std::runtime_error("augmented basis document: wrong coefficient count");
  Poly psi = Poly::constant(ab.base.dim, 0.0);
  for (int i = 0; i < container->size(); ++i)
    if (ab.d[i] != 0.0) psi = psi + container->fn[i].scaled(ab.d[i]);
  ab.psi = psi;
  return ab;
}

/// One constant-coefficient parameter tuple for the reference-cell search.
struct ParamTuple {
  int dim = 2;
  std::array<double, 3> adv = {1.0, 1.0, 1.0};
  double gamma = 0.0;
  std::array<double, 3> width = {2.0, 2.0, 2.0};

  double cfl_b() const { return width[0] * adv[1] / (width[1] * adv[0]); }
  LocalProblem problem(const PdeCoefficients& c) const {
    LocalProblem p;
    p.dim = dim;
    p.width = width;
    p.coeffs = &c;
    return p;
  }
  PdeCoefficients coefficients() const {
    PdeCoefficients c;
    for (int a = 0; a < dim; ++a) c.adv[a] = Coef(adv[a]);
    c.gamma = Coef(gamma);
    return c;
  }
};

struct AugmentOptions {
  int r = 0;  // ansatz degree; default k+1
  std::vector<ParamTuple> tuples;
  double margin = 1e-3;  // demanded min of v, in units of the unaugmented |v|
  int restarts = 8;
  uint64_t seed = 20240801ull;
  SolverOptions nlp;
  bool check_inflow_faces = false;
  // Extra reference-coordinate points (beyond the exactness rule's) where
  // the induced test function must be non-negative, e.g. the evaluation
  // points of a concentrated source.
  std::vector<Point> extra_check_points;
  std::optional<Regime> regime_hint;

  AugmentOptions() {
    nlp.stop_when_feasible = true;
    nlp.max_iter = 40;
    nlp.inner_iter = 120;
    nlp.feas_tol = 1e-12;
  }
};

struct AugmentFailure : std::runtime_error {
  double best_min_v;
  explicit AugmentFailure(const std::string& msg, double best)
      : std::runtime_error(msg), best_min_v(best) {}
};

namespace detail {

// Coefficient vectors over the ansatz basis, with the L2(reference) metric.
struct ComplementBasis {
  std::vector<int> base_map;          // base fn i -> index in ansatz basis
  std::vector<std::vector<double>> n_cols;  // G-orthonormal complement columns
  Mat gram;
};

inline ComplementBasis build_complement(const BasisSet& base, const BasisSet& ansatz) {
  const int nr = ansatz.size(), nk = base.size();
  ComplementBasis cb;
  cb.gram = Mat(nr, nr);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = ansatz.fn[i].inner(ansatz.fn[j]);
      cb.gram(i, j) = v;
      cb.gram(j, i) = v;
    }
  // locate each base monomial inside the ansatz list
  cb.base_map.assign(nk, -1);
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nr; ++j) {
      Poly diff = base.fn[i] + ansatz.fn[j].scaled(-1.0);
      if (diff.inner(diff) < 1e-24) {
        cb.base_map[i] = j;
        break;
      }
    }
    if (cb.base_map[i] < 0)
      throw std::logic_error("ansatz space does not contain the base space");
  }

  auto gdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int i = 0; i < nr; ++i) {
      double gi = 0.0;
      for (int j = 0; j < nr; ++j) gi += cb.gram(i, j) * b[j];
      s += a[i] * gi;
    }
    return s;
  };

  std::vector<std::vector<double>> ortho;  // spans base first, then complement
  auto push = [&](std::vector<double> v, bool to_complement) {
    for (const auto& o : ortho) {
      const double c = gdot(o, v);
      for (int i = 0; i < nr; ++i) v[i] -= c * o[i];
    }
    const double n2 = gdot(v, v);
    if (n2 < 1e-16) return false;
    const double inv = 1.0 / std::sqrt(n2);
    for (double& x : v) x *= inv;
    ortho.push_back(v);
    if (to_complement) cb.n_cols.push_back(ortho.back());
    return true;
  };
  for (int i = 0; i < nk; ++i) {
    std::vector<double> e(nr, 0.0);
    e[cb.base_map[i]] = 1.0;
    push(std::move(e), false);
  }
  for (int j = 0; j < nr && static_cast<int>(cb.n_cols.size()) < nr - nk; ++j) {
    std::vector<double> e(nr, 0.0);
    e[j] = 1.0;
    push(std::move(e), true);
  }
  if (static_cast<int>(cb.n_cols.size()) != nr - nk)
    throw std::logic_error("complement construction failed");
  return cb;
}

// Per-tuple precomputation for the implicit test-function constraint.
struct TupleContext {
  Mat k_op;                 // K(i,j) = L(phi_j, phi_i) over the ansatz basis
  std::vector<double> m_r;  // int phi_i over the cell
  Mat point_vals;           // ansatz basis values at the check points (q, i)
  Mat base_point_vals;      // check-point values of the embedded base funcs
  double scale = 1.0;       // |v|_inf of the unaugmented test function
};

inline std::vector<double> mat_vec(const Mat& m, const std::vector<double>& x) {
  return m.multiply(x);
}

}  // namespace detail

/// Search for an augmenting function by the implicit-test-function
/// optimization: candidate d defines psi, the (1 + dim X_k)-sized linear
/// system is solved for v, and v is required non-negative on the check set.
/// The search runs over the L2-orthogonal complement of X_k inside X_r,
/// which leaves the augmented space unchanged and rules out degenerate
/// candidates inside X_k.
inline AugmentedBasis find_augmented_basis(const SpaceSpec& base_spec,
                                           const AugmentOptions& opts_in) {
  AugmentOptions opts = opts_in;
  if (opts.r <= 0) opts.r = base_spec.k + 1;
  if (opts.r <= base_spec.k)
    throw std::invalid_argument("find_augmented_basis: need r > k");
  if (opts.tuples.empty())
    throw std::invalid_argument("find_augmented_basis: need at least one parameter tuple");

  const auto base = build_basis(base_spec);
  const SpaceSpec ansatz_spec{base_spec.family, opts.r, base_spec.dim};
  const auto ansatz = build_basis(ansatz_spec);
  const int nk = base->size(), nr = ansatz->size();
  const int nc = nr - nk;
  const auto cb = detail::build_complement(*base, *ansatz);

  AssemblyWorkspace ws;
  std::vector<detail::TupleContext> ctx;
  std::vector<PdeCoefficients> coefs;
  coefs.reserve(opts.tuples.size());
  const auto rule = gauss_legendre(required_points_for(ansatz->max_axis_degree),
                                   base_spec.dim);
  for (const auto& tp : opts.tuples) {
    coefs.push_back(tp.coefficients());
    LocalProblem prob = tp.problem(coefs.back());
    detail::TupleContext tc;
    tc.k_op = assemble_local(prob, *ansatz, *ansatz, *rule, ws).a;
    tc.m_r = basis_cell_integrals(*ansatz, prob);

    std::vector<const detail::BasisTable*> tabs = {&ws.table(*ansatz, *rule, -1)};
    if (opts.check_inflow_faces)
      for (int a = 0; a < base_spec.dim; ++a) tabs.push_back(&ws.table(*ansatz, *rule, 2 * a));
    int nq = 0;
    for (auto* t : tabs) nq += static_cast<int>(t->points.size());
    nq += static_cast<int>(opts.extra_check_points.size());
    tc.point_vals = Mat(nq, nr);
    int row = 0;
    for (auto* t : tabs)
      for (size_t q = 0; q < t->points.size(); ++q, ++row)
        for (int i = 0; i < nr; ++i) tc.point_vals(row, i) = t->val(static_cast<int>(q), i);
    for (const Point& p : opts.extra_check_points) {
      for (int i = 0; i < nr; ++i) tc.point_vals(row, i) = ansatz->fn[i].eval(p);
      ++row;
    }
    tc.base_point_vals = Mat(nq, nk);
    for (int q = 0; q < nq; ++q)
      for (int b = 0; b < nk; ++b) tc.base_point_vals(q, b) = tc.point_vals(q, cb.base_map[b]);

    // scale from the unaugmented test function
    Mat m0(nk, nk);
    std::vector<double> rhs0(nk);
    for (int b = 0; b < nk; ++b) {
      rhs0[b] = tc.m_r[cb.base_map[b]];
      for (int a = 0; a < nk; ++a) m0(b, a) = tc.k_op(cb.base_map[a], cb.base_map[b]);
    }
    const auto w0 = solve_dense(m0, rhs0).x;
    double s = 0.0;
    for (int q = 0; q < tc.point_vals.rows(); ++q) {
      double v = 0.0;
      for (int b = 0; b < nk; ++b) v += w0[b] * tc.base_point_vals(q, b);
      s = std::max(s, std::abs(v));
    }
    tc.scale = std::max(s, 1e-300);
    ctx.push_back(std::move(tc));
  }

  int total_points = 0;
  for (const auto& tc : ctx) total_points += tc.point_vals.rows();

  double current_margin = opts.margin;
  // v at the check points for a given complement vector y; empty on singular
  auto v_values = [&](const std::vector<double>& y, const detail::TupleContext& tc)
      -> std::vector<double> {
    std::vector<double> psi(nr, 0.0);
    for (int c = 0; c < nc; ++c)
      if (y[c] != 0.0)
        for (int i = 0; i < nr; ++i) psi[i] += cb.n_cols[c][i] * y[c];
    const std::vector<double> kpsi = tc.k_op.multiply(psi);
    std::vector<double> ktpsi(nr, 0.0);
    for (int i = 0; i < nr; ++i) {
      double s = 0.0;
      for (int j = 0; j < nr; ++j) s += tc.k_op(j, i) * psi[j];
      ktpsi[i] = s;
    }
    Mat msys(nk + 1, nk + 1);
    std::vector<double> rhs(nk + 1);
    for (int b = 0; b < nk; ++b) {
      rhs[b] = tc.m_r[cb.base_map[b]];
      for (int a = 0; a < nk; ++a) msys(b, a) = tc.k_op(cb.base_map[a], cb.base_map[b]);
      msys(b, nk) = ktpsi[cb.base_map[b]];  // test = psi column
      msys(nk, b) = kpsi[cb.base_map[b]];   // trial = psi row
    }
    double pkp = 0.0, mpsi = 0.0;
    for (int i = 0; i < nr; ++i) {
      pkp += psi[i] * kpsi[i];
      mpsi += tc.m_r[i] * psi[i];
    }
    msys(nk, nk) = pkp;
    rhs[nk] = mpsi;
    std::vector<double> w;
    try {
      w = solve_dense(msys, rhs).x;
    } catch (const std::exception&) {
      return {};
    }
    const std::vector<double> psi_vals = tc.point_vals.multiply(psi);
    std::vector<double> v(tc.point_vals.rows());
    for (int q = 0; q < tc.point_vals.rows(); ++q) {
      double s = w[nk] * psi_vals[q];
      for (int b = 0; b < nk; ++b) s += w[b] * tc.base_point_vals(q, b);
      v[q] = s;
    }
    return v;
  };

  NlpProblem nlp;
  nlp.n_vars = nc;
  nlp.objective = [nc](const std::vector<double>& y, std::vector<double>* grad) {
    double f = 0.0;
    if (grad) grad->assign(nc, 0.0);
    for (int i = 0; i < nc; ++i) {
      f += 1e-6 * y[i] * y[i];
      if (grad) (*grad)[i] = 2e-6 * y[i];
    }
    return f;
  };
  nlp.constraints = [&](const std::vector<double>& y) {
    std::vector<double> g;
    g.reserve(total_points);
    for (const auto& tc : ctx) {
      const auto v = v_values(y, tc);
      if (v.empty()) {
        g.insert(g.end(), tc.point_vals.rows(), -1e3);  // singular: repel
      } else {
        for (double vv : v) g.push_back(vv / tc.scale - current_margin);
      }
    }
    return g;
  };

  // initial guesses: regime-matching published psi when representable, then
  // seeded small random vectors
  std::vector<std::vector<double>> inits;
  if (opts.regime_hint && base_spec.dim == 2) {
    try {
      const Poly table = explicit_psi(base_spec.family, base_spec.k, *opts.regime_hint);
      if (table.max_axis_degree() <= ansatz->max_axis_degree) {
        std::vector<double> tv(nr, 0.0);
        bool ok = true;
        // exact monomial embedding (ansatz functions are single monomials)
        for (int e0 = 0; e0 <= table.degree(0) && ok; ++e0)
          for (int e1 = 0; e1 <= table.degree(1) && ok; ++e1) {
            const double c = table.at(e0, e1, 0);
            if (c == 0.0) continue;
            int idx = -1;
            for (int i = 0; i < nr; ++i)
              if (ansatz->fn[i].degree(0) >= e0 && ansatz->fn[i].degree(1) >= e1 &&
                  ansatz->fn[i].at(e0, e1, 0) != 0.0) {
                idx = i;
                break;
              }
            if (idx < 0)
              ok = false;
            else
              tv[idx] = c;
          }
        if (ok) {
          std::vector<double> y(nc, 0.0);
          const auto gv = cb.gram.multiply(tv);
          for (int c = 0; c < nc; ++c) {
            double s = 0.0;
            for (int i = 0; i < nr; ++i) s += cb.n_cols[c][i] * gv[i];
            y[c] = s;
          }
          if (inf_norm(y) > 1e-12) inits.push_back(std::move(y));
        }
      }
    } catch (const std::exception&) {
      // no table entry; fall through to random starts
    }
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> u(-1e-2, 1e-2);
  for (int rstart = 0; rstart < opts.restarts; ++rstart) {
    std::vector<double> y(nc);
    for (double& v : y) v = u(rng);
    inits.push_back(std::move(y));
  }

  double best_min = -std::numeric_limits<double>::infinity();
  for (double margin : {opts.margin, opts.margin / 30.0, opts.margin / 1000.0}) {
    current_margin = margin;
    for (const auto& y0 : inits) {
      NlpResult r = minimize(nlp, y0, opts.nlp);
      best_min = std::max(best_min, (r.min_constraint + current_margin));
      if (r.status == NlpStatus::InfeasibleMaxIter) continue;

      std::vector<double> d(nr, 0.0);
      for (int c = 0; c < nc; ++c)
        for (int i = 0; i < nr; ++i) d[i] += cb.n_cols[c][i] * r.x[c];
      double dn = 0.0;
      for (double v : d) dn += v * v;
      dn = std::sqrt(dn);
      if (dn < 1e-14) continue;
      for (double& v : d) v /= dn;
      Poly psi = Poly::constant(base_spec.dim, 0.0);
      for (int i = 0; i < nr; ++i)
        if (d[i] != 0.0) psi = psi + ansatz->fn[i].scaled(d[i]);

      // round-trip certificate on the same check set
      const auto aug = make_augmented_space(*base, psi);
      bool all_ok = true;
      for (size_t t = 0; t < opts.tuples.size(); ++t) {
        LocalProblem prob = opts.tuples[t].problem(coefs[t]);
        const auto cert = special_test_function(*aug, prob, *rule, ws, opts.check_inflow_faces);
        if (!cert.valid()) {
          all_ok = false;
          break;
        }
      }
      if (!all_ok) continue;

      AugmentedBasis ab;
      ab.base = base_spec;
      ab.r = opts.r;
      ab.ansatz_family = base_spec.family;
      ab.d = std::move(d);
      ab.psi = std::move(psi);
      ab.provenance = Provenance::Optimized;
      ab.regime = opts.regime_hint;
      return ab;
    }
  }
  std::ostringstream os;
  os << "find_augmented_basis: no feasible augmentation for " << base_spec.name() << " r="
     << opts.r << " after " << inits.size() << " starts; best normalized min v = " << best_min;
  throw AugmentFailure(os.str(), best_min);
}

struct CflSample {
  double b = 0.0;
  double min_v = 0.0;
  ParamTuple params;
};

/// Randomized robustness sweep of a published augmented basis: sample
/// dx, dy, alpha, beta, gamma, keep tuples inside the regime, and record
/// min v from the induced test function.
inline std::vector<CflSample> cfl_sweep(SpaceFamily family, int k, Regime regime,
                                        int n_samples, uint64_t seed) {
  const auto base = build_basis(SpaceSpec{family, k, 2});
  const auto aug = make_augmented_space(*base, explicit_psi(family, k, regime));
  const auto rule = gauss_legendre(required_points_for(aug->max_axis_degree), 2);
  AssemblyWorkspace ws;

  std::mt19937_64 rng(seed);
  auto logu = [&rng](double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return [&rng, u]() mutable { return std::exp(u(rng)); };
  };
  auto dx = logu(1e-3, 1.0), coefv = logu(1e-2, 1e2), gammav = logu(1e-4, 10.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::vector<CflSample> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < n_samples && guard++ < 400 * n_samples) {
    ParamTuple tp;
    tp.dim = 2;
    tp.width = {dx(), dx(), 2.0};
    tp.adv = {coefv(), coefv(), 1.0};
    tp.gamma = u01(rng) < 0.3 ? 0.0 : gammav();
    const double b = tp.cfl_b();
    if (!regime_admits(family, k, regime, b)) continue;  // outside the regime: excluded
    PdeCoefficients c = tp.coefficients();
    LocalProblem prob = tp.problem(c);
    const auto cert = special_test_function(*aug, prob, *rule, ws);
    out.push_back({b, cert.min_v, tp});
  }
  if (static_cast<int>(out.size()) < n_samples)
    throw std::runtime_error("cfl_sweep: sampling failed to hit the regime");
  return out;
}

}  // namespace augdg
