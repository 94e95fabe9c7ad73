#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmachine/embeddability.hpp"
#include "qmachine/epsilon_machine.hpp"

namespace qmachine {

/// Poll figures for one yes/no question.
struct QuestionStats {
  std::string label;
  double yes_fraction = 0.5;
  double predetermined_yes = 0.0;
  double predetermined_no = 0.0;
};

struct FittedQuestion {
  double epsilon;
  double d;
  /// Yes-rate the fitted experiment predicts for an unconditioned population.
  double predicted_yes;
  /// Set when predicted_yes differs from the observed yes-rate by more than 0.01.
  bool yes_mismatch;
};

/// Predetermined fractions are the eigenstate cap fractions (1 - eps - d)/2
/// and (1 - eps + d)/2; inverting gives eps = 1 - a - b and d = b - a.
/// Throws DomainError for figures no epsilon-experiment can produce.
FittedQuestion fit_epsilon_model(const QuestionStats& q);

struct SurveyQuestion {
  std::string label;
  EpsilonExperiment experiment;
  FittedQuestion fit;
};

struct SurveyModel {
  std::vector<SurveyQuestion> questions;
  double epsilon = 0.0;
  std::vector<std::string> warnings;

  /// Fits every question and places its axis in the x-z plane at the given
  /// angle from +z. The model needs one epsilon: `force_epsilon` overrides the
  /// fits, otherwise differing fits are averaged with a warning.
  static SurveyModel build(const std::vector<QuestionStats>& stats,
                           const std::vector<double>& axis_angles,
                           std::optional<double> force_epsilon = std::nullopt);

  double axis_angle(std::size_t i, std::size_t j) const;
};

/// P(target answer | condition answer) for one ordered pair of questions.
struct PairConditionals {
  std::size_t target;
  std::size_t condition;
  double angle;
  double yes_given_yes;
  double no_given_yes;
  double yes_given_no;
  double no_given_no;
};

std::vector<PairConditionals> predict_conditionals(const SurveyModel& m, double tol = 1e-9);

enum class Opinion { Yes, No, Open };
std::string to_string(Opinion o);

struct CensusRegion {
  std::array<Opinion, 3> opinions;
  std::uint64_t count;
  double fraction;
  double std_error;
};

struct RegionCensus {
  std::vector<CensusRegion> regions;  // all 27 combinations, fixed order
  std::uint64_t samples;
  std::uint64_t seed;
  std::size_t nonempty() const;
};

/// Sorts uniformly drawn persons by their predetermined answer (or lack of
/// one) to each of three questions. Sampling is split into fixed chunks with
/// their own substreams, so the result does not depend on `threads`.
/// Throws UsageError unless the model has exactly three questions.
RegionCensus region_census(const SurveyModel& m, std::uint64_t n, std::uint64_t seed,
                           unsigned threads = 0);

struct SurveyClassification {
  TriadData triad;
  Rational gamma2;
  KolmogorovVerdict kolmogorov;
  std::optional<HilbertVerdict> hilbert;  // nullopt when gamma2 is 0 or 1
  Classification classification;
};

/// Builds the chain triad P(V|W), P(U|W), P(not U|V) from questions
/// (U, V, W) = (0, 1, 2) and tests it. Predicted probabilities become exact
/// rationals as the simplest fraction within `rational_tol`.
SurveyClassification classify_survey(const SurveyModel& m, double rational_tol = 1e-9);

}  // namespace qmachine
