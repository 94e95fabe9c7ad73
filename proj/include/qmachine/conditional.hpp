#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmachine/epsilon_machine.hpp"
#include "qmachine/state_measures.hpp"

namespace qmachine {

/// Probability that `target` yields `target_outcome` once the base state has
/// been conditioned on `condition` certainly yielding `condition_outcome`.
class ConditionalQuery {
 public:
  /// Throws DomainError when the two experiments use different epsilons.
  static ConditionalQuery make(const EpsilonExperiment& target, const EpsilonExperiment& condition,
                               Outcome target_outcome = Outcome::O1,
                               Outcome condition_outcome = Outcome::O1,
                               MixedState base = MixedState::uniform());

  /// Coplanar pair at angle `alpha` with d = c = 0, outcome 1 on both.
  static ConditionalQuery coplanar(double epsilon, double alpha, double d = 0.0, double c = 0.0);

  const EpsilonExperiment& target() const { return target_; }
  const EpsilonExperiment& condition() const { return condition_; }
  Outcome target_outcome() const { return target_outcome_; }
  Outcome condition_outcome() const { return condition_outcome_; }
  const MixedState& base() const { return base_; }

 private:
  ConditionalQuery(const EpsilonExperiment& t, const EpsilonExperiment& c, Outcome to, Outcome co,
                   MixedState base)
      : target_(t), condition_(c), target_outcome_(to), condition_outcome_(co), base_(std::move(base)) {}

  EpsilonExperiment target_;
  EpsilonExperiment condition_;
  Outcome target_outcome_;
  Outcome condition_outcome_;
  MixedState base_;
};

enum class Method { Quadrature, MonteCarlo, ClosedForm };
enum class Validity { Valid, RegimeOverlap, DomainInvalid };

std::string to_string(Method m);
std::string to_string(Validity v);

/// Every intermediate quantity of the closed form, for diagnosis.
/// Quantities whose real domain is violated are NaN and listed in
/// `domain_violations`.
struct ClosedFormDiagnostics {
  double h1_arg = 0.0;   // epsilon - cos(alpha/2)
  double h2a_arg = 0.0;  // epsilon - sin(alpha/2)
  double h2b_arg = 0.0;  // cos(alpha/2) - epsilon
  double h3_arg = 0.0;   // sin(alpha/2) - epsilon
  bool term1 = false, term2 = false, term3 = false;

  double p1 = 0.0, p2 = 0.0, p3 = 0.0;
  double omega_u = 0.0, omega_minus_u = 0.0;  // omega(u,w), omega(-u,w)
  double sigma_u = 0.0, sigma_minus_u = 0.0;  // sigma(u,w), sigma(-u,w)

  /// 1 - (epsilon / cos(alpha/2))^2 for alpha and for pi - alpha.
  double radicand_u = 0.0, radicand_minus_u = 0.0;
  /// Argument of Arcsin in omega and of Arccos in sigma, for u and -u.
  double arcsin_arg_u = 0.0, arcsin_arg_minus_u = 0.0;
  double arccos_arg_u = 0.0, arccos_arg_minus_u = 0.0;

  std::vector<std::string> domain_violations;
  int active_terms() const { return int(term1) + int(term2) + int(term3); }
};

struct ConditionalResult {
  double value = 0.0;
  Method method = Method::Quadrature;
  /// Quadrature error estimate, Monte Carlo standard error, or for the
  /// closed form the distance to the quadrature value (NaN if undefined).
  double error_bound = 0.0;
  Validity validity = Validity::Valid;
  /// True when the conditioning set was a single point and the value is
  /// the limit of conditioning on shrinking caps around it.
  bool point_limit = false;
  ClosedFormDiagnostics diagnostics;  // closed form only
};

inline constexpr double kDefaultConditionalTol = 1e-8;

/// Authoritative route: integrates the outcome kernel against the
/// conditioned state. A conditioning set that is a single point (a
/// zero-radius cap, e.g. epsilon = 1) is evaluated as the point limit.
ConditionalResult conditional_quad(const ConditionalQuery& q, double tol = kDefaultConditionalTol);

/// Samples the conditioned state and runs hidden-measurement trials.
ConditionalResult conditional_mc(const ConditionalQuery& q, std::uint64_t n, std::uint64_t seed);

/// The published closed form for d = c = 0, evaluated term by term with the
/// convention H(0) = 1. Overlapping regimes and out-of-domain radicands or
/// arc arguments are reported in `validity`; nothing is thrown for them.
ConditionalResult conditional_closed_form(double epsilon, double alpha);

/// Evaluates only the closed-form expression, without the quadrature comparison.
ClosedFormDiagnostics closed_form_terms(double epsilon, double alpha);

struct SweepRow {
  double epsilon;
  double alpha;
  double p_quad;
  double p_closed_form;  // NaN when undefined
  Validity validity;
  double p_mc;       // NaN when Monte Carlo is disabled
  double mc_stderr;  // NaN when Monte Carlo is disabled
};

struct SweepOptions {
  double tol = kDefaultConditionalTol;
  std::uint64_t mc_trials = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Rows for every epsilon (sorted ascending) and alpha = pi k / (steps - 1).
/// Row order and values do not depend on the thread count.
std::vector<SweepRow> sweep(std::vector<double> epsilons, std::size_t alpha_steps,
                            const SweepOptions& options = {});

}  // namespace qmachine
