#include "qmachine/conditional.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "qmachine/errors.hpp"

namespace qmachine {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }

/// The single state the conditioning set collapses to, if it is a point.
std::optional<UnitVector> point_condition(const ConditionalQuery& q) {
  const Region eig = eig_set(q.condition(), to_outcome_set(q.condition_outcome()));
  if (eig.kind() != Region::Kind::Cap || eig.sector().half_angle > 0.0) return std::nullopt;
  const UnitVector& point = eig.sector().center;
  const MixedState& base = q.base();
  if (base.kind() == MixedState::Kind::Uniform) return point;
  if (base.kind() == MixedState::Kind::CapUniform) {
    const auto& caps = base.caps();
    const bool interior = std::all_of(caps.begin(), caps.end(), [&](const SectorCap& c) {
      return angle_between(c.center, point) < c.half_angle;
    });
    if (interior) return point;
  }
  throw ConditioningError("conditioning set is a single point outside the base state's support");
}

double target_probability(const ConditionalQuery& q, const UnitVector& state) {
  const OutcomeDistribution p = outcome_probabilities(q.target(), state);
  return q.target_outcome() == Outcome::O1 ? p.p1 : p.p2;
}

ConditionalResult mc_with_stream(const ConditionalQuery& q, std::uint64_t n, RandomStream& stream) {
  if (n == 0) throw UsageError("trial count must be positive");
  const std::optional<UnitVector> point = point_condition(q);
  std::optional<MixedState> conditioned;
  if (!point) {
    conditioned = condition(q.base(), q.condition(), to_outcome_set(q.condition_outcome()));
  }
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const UnitVector v = point ? *point : conditioned->sample(stream);
    if (run_trial(q.target(), v, stream).outcome == q.target_outcome()) ++hits;
  }
  ConditionalResult r;
  r.method = Method::MonteCarlo;
  r.value = static_cast<double>(hits) / static_cast<double>(n);
  r.error_bound = std::sqrt(r.value * (1.0 - r.value) / static_cast<double>(n));
  r.point_limit = point.has_value();
  return r;
}

std::string describe(const char* what, double value, const char* rule) {
  std::ostringstream os;
  os.precision(17);
  os << what << " = " << value << " " << rule;
  return os.str();
}

/// omega and sigma of the closed form at angle `a` (alpha for u, pi - alpha
/// for -u). Out-of-domain pieces become NaN and are reported.
struct AuxTerms {
  double omega = 0.0, sigma = 0.0;
  double radicand = 0.0, arcsin_arg = 0.0, arccos_arg = 0.0;
};

AuxTerms aux_terms(double eps, double a, const std::string& label,
                   std::vector<std::string>& violations) {
  AuxTerms t;
  const double half_cos = std::cos(a / 2.0);
  const double half_sin = std::sin(a / 2.0);
  const double one_minus_eps2 = 1.0 - eps * eps;
  const double root_one_minus_eps2 = std::sqrt(one_minus_eps2);
  t.radicand = 1.0 - (eps / half_cos) * (eps / half_cos);
  t.arcsin_arg = half_sin / root_one_minus_eps2;
  t.arccos_arg = eps * std::tan(a / 2.0) / root_one_minus_eps2;

  bool omega_ok = true, sigma_ok = true;
  if (!(one_minus_eps2 > 0.0)) {
    violations.push_back(describe(("1 - eps^2 in " + label).c_str(), one_minus_eps2, "is not positive"));
    omega_ok = sigma_ok = false;
  }
  if (!(t.radicand >= 0.0)) {
    violations.push_back(describe(("radicand 1-(eps/cos(a/2))^2 of " + label).c_str(), t.radicand, "< 0"));
    omega_ok = sigma_ok = false;
  }
  if (omega_ok && !(std::abs(t.arcsin_arg) <= 1.0)) {
    violations.push_back(describe(("Arcsin argument of omega" + label.substr(label.find('('))).c_str(),
                                  t.arcsin_arg, "outside [-1, 1]"));
    omega_ok = false;
  }
  if (sigma_ok && !(std::abs(t.arccos_arg) <= 1.0)) {
    violations.push_back(describe(("Arccos argument of sigma" + label.substr(label.find('('))).c_str(),
                                  t.arccos_arg, "outside [-1, 1]"));
    sigma_ok = false;
  }
  if (omega_ok) {
    const double inner = std::sqrt(t.radicand / one_minus_eps2);
    if (inner > 1.0) {
      violations.push_back(describe(("Arccos argument of omega" + label.substr(label.find('('))).c_str(),
                                    inner, "outside [-1, 1]"));
      omega_ok = false;
    } else {
      t.omega = 4.0 * eps * std::acos(inner) - 4.0 * std::asin(t.arcsin_arg);
    }
  }
  if (sigma_ok) {
    t.sigma = eps * std::tan(a / 2.0) * std::sqrt(t.radicand) - one_minus_eps2 * std::acos(t.arccos_arg);
  }
  if (!omega_ok) t.omega = kNaN;
  if (!sigma_ok) t.sigma = kNaN;
  return t;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Quadrature:
      return "quadrature";
    case Method::MonteCarlo:
      return "monte-carlo";
    case Method::ClosedForm:
      return "closed-form";
  }
  return "?";
}

std::string to_string(Validity v) {
  switch (v) {
    case Validity::Valid:
      return "valid";
    case Validity::RegimeOverlap:
      return "regime-overlap";
    case Validity::DomainInvalid:
      return "domain-invalid";
  }
  return "?";
}

ConditionalQuery ConditionalQuery::make(const EpsilonExperiment& target,
                                        const EpsilonExperiment& condition, Outcome target_outcome,
                                        Outcome condition_outcome, MixedState base) {
  if (target.epsilon() != condition.epsilon()) {
    throw DomainError("both experiments of a conditional query must share epsilon");
  }
  return ConditionalQuery(target, condition, target_outcome, condition_outcome, std::move(base));
}

ConditionalQuery ConditionalQuery::coplanar(double epsilon, double alpha, double d, double c) {
  if (!(alpha >= 0.0 && alpha <= kPi)) throw DomainError("alpha must lie in [0, pi]");
  const UnitVector w = UnitVector::north();
  const UnitVector u = UnitVector::from_spherical(alpha, 0.0);
  return make(EpsilonExperiment::make(u, epsilon, d), EpsilonExperiment::make(w, epsilon, c));
}

ConditionalResult conditional_quad(const ConditionalQuery& q, double tol) {
  ConditionalResult r;
  r.method = Method::Quadrature;
  if (const auto point = point_condition(q)) {
    r.value = target_probability(q, *point);
    r.point_limit = true;
    return r;
  }
  const MixedState conditioned = condition(q.base(), q.condition(), to_outcome_set(q.condition_outcome()));
  r.value = outcome_probability_mixed(q.target(), to_outcome_set(q.target_outcome()), conditioned, tol);
  r.error_bound = tol;
  return r;
}

ConditionalResult conditional_mc(const ConditionalQuery& q, std::uint64_t n, std::uint64_t seed) {
  RandomStream stream(seed);
  return mc_with_stream(q, n, stream);
}

ClosedFormDiagnostics closed_form_terms(double epsilon, double alpha) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("closed form needs epsilon in (0, 1]");
  if (!(alpha >= 0.0 && alpha <= kPi)) throw DomainError("alpha must lie in [0, pi]");
  ClosedFormDiagnostics g;
  const double c2 = std::cos(alpha / 2.0);
  const double s2 = std::sin(alpha / 2.0);
  g.h1_arg = epsilon - c2;
  g.h2a_arg = epsilon - s2;
  g.h2b_arg = c2 - epsilon;
  g.h3_arg = s2 - epsilon;
  g.term1 = heaviside(g.h1_arg) > 0.0;
  g.term2 = heaviside(g.h2a_arg) * heaviside(g.h2b_arg) > 0.0;
  g.term3 = heaviside(g.h3_arg) > 0.0;

  const double ca = std::cos(alpha);
  g.p1 = ca * (1.0 + epsilon) / (4.0 * epsilon) + 0.5;

  std::vector<std::string> all;
  const AuxTerms u = aux_terms(epsilon, alpha, "omega/sigma(u,w)", all);
  const AuxTerms mu = aux_terms(epsilon, kPi - alpha, "omega/sigma(-u,w)", all);
  g.omega_u = u.omega;
  g.sigma_u = u.sigma;
  g.omega_minus_u = mu.omega;
  g.sigma_minus_u = mu.sigma;
  g.radicand_u = u.radicand;
  g.radicand_minus_u = mu.radicand;
  g.arcsin_arg_u = u.arcsin_arg;
  g.arcsin_arg_minus_u = mu.arcsin_arg;
  g.arccos_arg_u = u.arccos_arg;
  g.arccos_arg_minus_u = mu.arccos_arg;

  const double one_minus = 1.0 - epsilon;
  if (one_minus > 0.0) {
    g.p2 = g.p1 + 0.5 + u.omega / (4.0 * kPi * one_minus) +
           (ca + 1.0) / (4.0 * kPi * epsilon * one_minus) * u.sigma;
    g.p3 = g.p1 + (u.omega - mu.omega) / (4.0 * kPi * one_minus) +
           ((ca - 1.0) * mu.sigma + (ca + 1.0) * u.sigma) / (4.0 * kPi * epsilon * one_minus);
  } else {
    g.p2 = g.p3 = kNaN;
  }

  // Report the violations that touch an active term; an inactive term is
  // multiplied by H = 0 and does not enter the value.
  auto touches = [&](const std::string& msg, bool minus_u) {
    const bool is_minus = msg.find("(-u,w)") != std::string::npos;
    return minus_u ? is_minus : !is_minus;
  };
  for (const auto& msg : all) {
    const bool used = ((g.term2 || g.term3) && touches(msg, false)) || (g.term3 && touches(msg, true));
    g.domain_violations.push_back(used ? msg : msg + " (inactive term)");
  }
  if ((g.term2 || g.term3) && !(one_minus > 0.0)) {
    g.domain_violations.push_back(describe("1 - epsilon", one_minus, "is zero in a 1/(1 - epsilon) factor"));
  }
  return g;
}

ConditionalResult conditional_closed_form(double epsilon, double alpha) {
  ConditionalResult r;
  r.method = Method::ClosedForm;
  r.diagnostics = closed_form_terms(epsilon, alpha);
  const ClosedFormDiagnostics& g = r.diagnostics;

  double value = 0.0;
  if (g.term1) value += g.p1;
  if (g.term2) value += g.p2;
  if (g.term3) value += g.p3;
  r.value = value;

  const bool active_violation =
      std::any_of(g.domain_violations.begin(), g.domain_violations.end(),
                  [](const std::string& m) { return m.find("(inactive term)") == std::string::npos; });
  if (g.active_terms() > 1) {
    r.validity = Validity::RegimeOverlap;
  } else if (active_violation || !std::isfinite(value)) {
    r.validity = Validity::DomainInvalid;
  }
  if (!std::isfinite(r.value)) r.value = kNaN;
  const double reference = conditional_quad(ConditionalQuery::coplanar(epsilon, alpha)).value;
  r.error_bound = std::isfinite(r.value) ? std::abs(r.value - reference) : kNaN;
  return r;
}

std::vector<SweepRow> sweep(std::vector<double> epsilons, std::size_t alpha_steps,
                            const SweepOptions& options) {
  if (alpha_steps < 2) throw UsageError("alpha_steps must be at least 2");
  if (epsilons.empty()) throw UsageError("sweep needs at least one epsilon");
  std::sort(epsilons.begin(), epsilons.end());
  for (double e : epsilons) {
    if (!(e >= 0.0 && e <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
  }

  const std::size_t total = epsilons.size() * alpha_steps;
  std::vector<SweepRow> rows(total);
  auto compute = [&](std::size_t index) {
    const double eps = epsilons[index / alpha_steps];
    const std::size_t k = index % alpha_steps;
    const double alpha = k + 1 == alpha_steps
                             ? kPi
                             : kPi * static_cast<double>(k) / static_cast<double>(alpha_steps - 1);
    SweepRow row{eps, alpha, 0.0, kNaN, Validity::DomainInvalid, kNaN, kNaN};
    const ConditionalQuery q = ConditionalQuery::coplanar(eps, alpha);
    row.p_quad = conditional_quad(q, options.tol).value;
    if (eps > 0.0) {
      const ConditionalResult cf = conditional_closed_form(eps, alpha);
      row.p_closed_form = cf.value;
      row.validity = cf.validity;
    }
    if (options.mc_trials > 0) {
      RandomStream stream = RandomStream::substream(options.seed, index);
      const ConditionalResult mc = mc_with_stream(q, options.mc_trials, stream);
      row.p_mc = mc.value;
      row.mc_stderr = mc.error_bound;
    }
    rows[index] = row;
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        compute(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace qmachine
