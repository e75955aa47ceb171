#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "nsc/norms.hpp"
#include "nsc/rational.hpp"

namespace nsc {

// ---------------------------------------------------------------------------
// Exponent algebra for the one-entry criteria.
//
// Off-diagonal entry (j != k):  alpha > 3,  3/alpha + 2/beta <= (alpha + 3) / (2 alpha)
// Diagonal entry     (j == k):  alpha > 2,  3/alpha + 2/beta <= 3 (alpha + 2) / (4 alpha)
// with 1 <= beta < infinity. All templates work for double and for Rational;
// use Rational when boundary equalities matter.

enum class EntryKind { diagonal, off_diagonal };

inline const char* to_string(EntryKind k) {
  return k == EntryKind::diagonal ? "diagonal" : "off_diagonal";
}

inline EntryKind entry_kind(int j, int k) { return j == k ? EntryKind::diagonal : EntryKind::off_diagonal; }

template <class T>
void require_alpha_range(const T& alpha, EntryKind kind) {
  if (kind == EntryKind::off_diagonal) {
    require(alpha > T(3), "off-diagonal entries need alpha > 3");
  } else {
    require(alpha > T(2), "diagonal entries need alpha > 2");
  }
}

/// Right-hand side of the admissibility inequality.
template <class T>
T admissibility_bound(const T& alpha, EntryKind kind) {
  if (kind == EntryKind::off_diagonal) return T((alpha + T(3)) / (T(2) * alpha));
  return T(T(3) * (alpha + T(2)) / (T(4) * alpha));
}

/// Smallest beta on the admissibility boundary: 4a/(a-3) off-diagonal, 8a/(3(a-2)) diagonal.
template <class T>
T beta_min(const T& alpha, EntryKind kind) {
  require_alpha_range(alpha, kind);
  // Solve 3/a + 2/b = bound for b.
  const T slack = T(admissibility_bound(alpha, kind) - T(3) / alpha);
  return T(T(2) / slack);
}

/// Time exponent of the entry norm in the closing Gronwall step.
template <class T>
T gronwall_exponent(const T& alpha, EntryKind kind) {
  require_alpha_range(alpha, kind);
  if (kind == EntryKind::off_diagonal) return T(T(4) * alpha / (alpha - T(3)));
  return T(T(8) * alpha / (T(3) * (alpha - T(2))));
}

template <class T>
struct AdmissibilityVerdict {
  T alpha;
  T beta;
  EntryKind kind;
  bool satisfied_strict = false;  ///< strict "<" form
  bool satisfied_weak = false;    ///< "<=" form, the operative test
  T beta_min;
  T gronwall_exponent;
};

template <class T>
AdmissibilityVerdict<T> is_admissible(const T& alpha, const T& beta, EntryKind kind) {
  require_alpha_range(alpha, kind);
  require(beta >= T(1), "beta must be >= 1");
  if constexpr (std::is_floating_point_v<T>) require(std::isfinite(beta), "beta must be finite");
  const T lhs = T(T(3) / alpha + T(2) / beta);
  const T rhs = admissibility_bound(alpha, kind);
  return {alpha, beta, kind, lhs < rhs, lhs <= rhs, beta_min(alpha, kind),
          gronwall_exponent(alpha, kind)};
}

// ---------------------------------------------------------------------------
// Monitored condition

/// Condition on the entry d u_j / d x_k (1-based) in L^beta(0,T; L^alpha).
struct CriterionSpec {
  int j = 3;
  int k = 1;
  Rational alpha = 9;
  Rational beta = 6;

  EntryKind kind() const { return entry_kind(j, k); }
  double alpha_value() const { return to_double(alpha); }
  double beta_value() const { return to_double(beta); }

  void validate() const {
    require(j >= 1 && j <= 3 && k >= 1 && k <= 3, "criterion entry indices must be in 1..3");
    require_alpha_range(alpha, kind());
    require(beta >= 1, "criterion beta must be >= 1");
  }

  /// "jk" label, e.g. "31".
  std::string entry_label() const { return std::to_string(j) + std::to_string(k); }
};

/// Parses "jk:alpha:beta", e.g. "31:9:6" or "33:5/2:12".
inline CriterionSpec parse_criterion(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  require(b != std::string::npos, "criterion must look like jk:alpha:beta, got '" + text + "'");
  const std::string entry = text.substr(0, a);
  require(entry.size() == 2 && entry[0] >= '1' && entry[0] <= '3' && entry[1] >= '1' &&
              entry[1] <= '3',
          "criterion entry must be two digits in 1..3, got '" + entry + "'");
  CriterionSpec spec{entry[0] - '0', entry[1] - '0', parse_rational(text.substr(a + 1, b - a - 1)),
                     parse_rational(text.substr(b + 1))};
  spec.validate();
  return spec;
}

inline std::string format_criterion(const CriterionSpec& s) {
  return s.entry_label() + ":" + to_string(s.alpha) + ":" + to_string(s.beta);
}

/// ||d u_j / d x_k||_alpha via a spectral derivative (j, k are 1-based).
inline NormValue entry_norm(const SpectralVectorField& u_hat, int j, int k, double alpha) {
  require(j >= 1 && j <= 3 && k >= 1 && k <= 3, "entry indices must be in 1..3");
  return lp_norm(inverse(derivative(u_hat[j - 1], axis_from_label(k))), alpha);
}

inline NormValue entry_norm(const VectorField& u, int j, int k, double alpha) {
  return entry_norm(forward(u), j, k, alpha);
}

// ---------------------------------------------------------------------------
// Time integrals

/// Trapezoid accumulation of int_0^t v(s)^beta ds on the sample times.
struct RunningIntegral {
  double t = 0.0;
  double integrand = 0.0;  ///< v^beta at t
  double value = 0.0;
  bool started = false;
};

inline RunningIntegral accumulate(const RunningIntegral& prev, double t, double value,
                                  double beta) {
  require(value >= 0.0, "accumulate: norm values are nonnegative");
  const double integrand = std::pow(value, beta);
  if (!prev.started) return {t, integrand, 0.0, true};
  require(t >= prev.t, "accumulate: time must not decrease");
  return {t, integrand, prev.value + 0.5 * (t - prev.t) * (prev.integrand + integrand), true};
}

// ---------------------------------------------------------------------------
// Per-output diagnostics

struct MonitorRecord {
  double t = 0.0;
  double energy = 0.0;                ///< ||u||_2^2
  double dissipation_integral = 0.0;  ///< 2 nu int_0^t ||grad u||_2^2 ds
  double energy_residual = 0.0;       ///< energy + dissipation_integral - energy(0)
  double grad_l2 = 0.0;               ///< ||grad u||_2^2
  double grad_h_l2 = 0.0;             ///< ||grad_h u||_2^2
  std::vector<EntryNormMatrix> entry_norms;
  std::vector<double> criterion_integrals;  ///< int ||entry||_alpha^beta, per spec
  std::vector<double> gronwall_integrals;   ///< same with beta = gronwall_exponent
  std::vector<double> gronwall_bounds;      ///< report-only bound, per spec
};

/// B(t) = c_hat (1 + ||grad u_0||_2^2) exp(c_hat G(t)).
inline double gronwall_bound(double grad0_sq, double gronwall_integral, double c_hat) {
  return c_hat * (1.0 + grad0_sq) * std::exp(c_hat * gronwall_integral);
}

/// Bound series for spec `index` from recorded Gronwall integrals. The
/// constant in the estimate is unknown, so this is a reporting device only.
inline std::vector<double> gronwall_tracker(std::span<const MonitorRecord> series,
                                            std::size_t index, double c_hat) {
  std::vector<double> out;
  if (series.empty()) return out;
  const double grad0 = series.front().grad_l2;
  out.reserve(series.size());
  for (const auto& r : series) {
    require(index < r.gronwall_integrals.size(), "gronwall_tracker: no such criterion");
    out.push_back(gronwall_bound(grad0, r.gronwall_integrals[index], c_hat));
  }
  return out;
}

/// Builds MonitorRecords from a spectral velocity at increasing output times.
class CriterionMonitor {
 public:
  CriterionMonitor(std::vector<CriterionSpec> specs, std::vector<double> extra_alphas = {},
                   double c_hat = 1.0)
      : specs_(std::move(specs)), c_hat_(c_hat) {
    for (const auto& s : specs_) {
      s.validate();
      add_alpha(s.alpha_value());
    }
    for (double a : extra_alphas) {
      require(a >= 1.0, "entry-norm exponents must be >= 1");
      add_alpha(a);
    }
    for (const auto& s : specs_) {
      gronwall_exponents_.push_back(to_double(gronwall_exponent(s.alpha, s.kind())));
    }
    criterion_.resize(specs_.size());
    gronwall_.resize(specs_.size());
  }

  const std::vector<CriterionSpec>& specs() const { return specs_; }
  const std::vector<double>& alphas() const { return alphas_; }
  double c_hat() const { return c_hat_; }

  MonitorRecord observe(double t, const SpectralVectorField& u_hat, double dissipation_integral) {
    const GradNorms g = grad_norms(u_hat, alphas_);
    MonitorRecord rec;
    rec.t = t;
    rec.energy = l2_norm_squared(u_hat);
    rec.dissipation_integral = dissipation_integral;
    rec.grad_l2 = g.grad_l2 * g.grad_l2;
    rec.grad_h_l2 = g.grad_h_l2 * g.grad_h_l2;
    rec.entry_norms = g.entries;
    if (!started_) {
      energy0_ = rec.energy;
      grad0_ = rec.grad_l2;
      started_ = true;
    }
    rec.energy_residual = rec.energy + dissipation_integral - energy0_;
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      const auto& s = specs_[i];
      const double v = entry_value(rec, s);
      criterion_[i] = accumulate(criterion_[i], t, v, s.beta_value());
      gronwall_[i] = accumulate(gronwall_[i], t, v, gronwall_exponents_[i]);
      rec.criterion_integrals.push_back(criterion_[i].value);
      rec.gronwall_integrals.push_back(gronwall_[i].value);
      rec.gronwall_bounds.push_back(gronwall_bound(grad0_, gronwall_[i].value, c_hat_));
    }
    return rec;
  }

  /// CSV header matching `row`.
  std::vector<std::string> columns() const {
    std::vector<std::string> cols{"t", "energy", "grad_l2", "grad_h_l2"};
    for (double a : alphas_)
      for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k)
          cols.push_back("du" + std::to_string(j) + "dx" + std::to_string(k) + "_a" + number(a));
    for (const auto& s : specs_)
      cols.push_back("I_" + s.entry_label() + "_a" + to_label(s.alpha) + "_b" + to_label(s.beta));
    cols.push_back("energy_residual");
    cols.push_back("dissipation_integral");
    for (const auto& s : specs_) cols.push_back("G_" + s.entry_label() + "_a" + to_label(s.alpha));
    for (const auto& s : specs_) cols.push_back("B_" + s.entry_label() + "_a" + to_label(s.alpha));
    return cols;
  }

  std::vector<double> row(const MonitorRecord& r) const {
    std::vector<double> v{r.t, r.energy, r.grad_l2, r.grad_h_l2};
    for (const auto& m : r.entry_norms)
      for (const auto& line : m.value)
        for (double x : line) v.push_back(x);
    for (double x : r.criterion_integrals) v.push_back(x);
    v.push_back(r.energy_residual);
    v.push_back(r.dissipation_integral);
    for (double x : r.gronwall_integrals) v.push_back(x);
    for (double x : r.gronwall_bounds) v.push_back(x);
    return v;
  }

 private:
  void add_alpha(double a) {
    for (double x : alphas_)
      if (x == a) return;
    alphas_.push_back(a);
  }

  double entry_value(const MonitorRecord& rec, const CriterionSpec& s) const {
    const double a = s.alpha_value();
    for (const auto& m : rec.entry_norms)
      if (m.alpha == a) return m.value[std::size_t(s.j - 1)][std::size_t(s.k - 1)];
    throw InvalidArgument("missing entry norm for alpha");
  }

  static std::string number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    // Prefer the short form when it round-trips.
    for (int prec = 1; prec < 17; ++prec) {
      std::snprintf(buf, sizeof buf, "%.*g", prec, x);
      if (std::strtod(buf, nullptr) == x) return buf;
    }
    return s;
  }
  static std::string to_label(const Rational& r) {
    std::string s = to_string(r);
    for (char& c : s)
      if (c == '/') c = '_';
    return s;
  }

  std::vector<CriterionSpec> specs_;
  std::vector<double> alphas_;
  std::vector<double> gronwall_exponents_;
  double c_hat_;
  bool started_ = false;
  double energy0_ = 0.0;
  double grad0_ = 0.0;
  std::vector<RunningIntegral> criterion_;
  std::vector<RunningIntegral> gronwall_;
};

// ---------------------------------------------------------------------------
// Energy audit

struct EnergyAuditEntry {
  double t = 0.0;
  double residual = 0.0;          ///< ||u||^2 + 2 nu int ||grad u||^2 - ||u_0||^2
  double inequality_excess = 0.0; ///< ||u||^2 + nu int ||grad u||^2 - ||u_0||^2, must be <= 0
  bool flagged = false;
};

struct EnergyAudit {
  std::vector<EnergyAuditEntry> entries;
  double max_abs_residual = 0.0;
  std::size_t flagged = 0;
  bool ok() const { return flagged == 0; }
};

/// Flags records whose residual or inequality excess is positive beyond
/// `relative_tolerance * ||u_0||^2`.
inline EnergyAudit audit_energy(std::span<const MonitorRecord> series,
                                double relative_tolerance = 1e-6) {
  EnergyAudit audit;
  if (series.empty()) return audit;
  const double e0 = series.front().energy;
  const double slack = relative_tolerance * e0;
  for (const auto& r : series) {
    EnergyAuditEntry e{r.t, r.energy + r.dissipation_integral - e0,
                       r.energy + 0.5 * r.dissipation_integral - e0, false};
    e.flagged = !std::isfinite(e.residual) || e.residual > slack || e.inequality_excess > slack;
    audit.max_abs_residual = std::max(audit.max_abs_residual, std::abs(e.residual));
    if (e.flagged) ++audit.flagged;
    audit.entries.push_back(e);
  }
  return audit;
}

}  // namespace nsc
