#include "qmachine/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmachine/conditional.hpp"
#include "qmachine/embeddability.hpp"
#include "qmachine/epsilon_machine.hpp"
#include "qmachine/errors.hpp"
#include "qmachine/rational.hpp"
#include "qmachine/survey.hpp"

namespace qmachine::cli {

using nlohmann::json;

namespace {

constexpr double kDegree = kPi / 180.0;

struct Seed {
  std::uint64_t value = kDefaultSeed;
  std::string source = "default";
};

/// Flag beats QMACHINE_SEED beats the built-in default.
Seed resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return {*flag, "flag"};
  if (const char* env = std::getenv("QMACHINE_SEED"); env && *env) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError("QMACHINE_SEED must be an unsigned integer");
    }
    return {v, "env"};
  }
  return {};
}

json metadata(const Seed& seed, std::uint64_t trials) {
  return {{"seed", seed.value}, {"seed_source", seed.source}, {"trials", trials}, {"version", kVersion}};
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

UnitVector parse_vector(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw UsageError(std::string(what) + " needs three components");
  return UnitVector::normalized(v[0], v[1], v[2]);
}

std::string outcome_name(Outcome o) { return o == Outcome::O1 ? "o1" : "o2"; }

Outcome parse_outcome(int k) { return k == 1 ? Outcome::O1 : Outcome::O2; }

/// Where the particle sits relative to the experiment axis.
struct StateFlags {
  std::optional<double> theta;
  std::optional<double> x;
  std::vector<double> state;
  std::vector<double> axis;

  void add_to(CLI::App* cmd) {
    auto* t = cmd->add_option("--theta", theta, "angle between state and axis");
    auto* p = cmd->add_option("--x", x, "projection v.u of the state on the axis")->check(CLI::Range(-1.0, 1.0));
    auto* s = cmd->add_option("--state", state, "state vector x,y,z")->delimiter(',')->expected(3);
    cmd->add_option("--axis", axis, "axis vector x,y,z (default +z)")->delimiter(',')->expected(3);
    t->excludes(p)->excludes(s);
    p->excludes(s);
  }

  /// (axis, state) pair; the state is built in the x-z plane when only an
  /// angle or projection is given.
  std::pair<UnitVector, UnitVector> resolve(bool degrees) const {
    const UnitVector u = axis.empty() ? UnitVector::north() : parse_vector(axis, "--axis");
    if (!state.empty()) return {u, parse_vector(state, "--state")};
    double angle = 0.0;
    if (theta) {
      angle = *theta * (degrees ? kDegree : 1.0);
    } else if (x) {
      angle = std::acos(*x);
    } else {
      throw UsageError("one of --theta, --x or --state is required");
    }
    const auto [e1, e2] = u.orthonormal_complement();
    (void)e2;
    const double c = std::cos(angle), s = std::sin(angle);
    return {u, UnitVector::normalized(c * u.x() + s * e1.x(), c * u.y() + s * e1.y(), c * u.z() + s * e1.z())};
  }
};

json diagnostics_json(const ClosedFormDiagnostics& g) {
  return {{"heaviside",
           {{"eps-cos(a/2)", g.h1_arg},
            {"eps-sin(a/2)", g.h2a_arg},
            {"cos(a/2)-eps", g.h2b_arg},
            {"sin(a/2)-eps", g.h3_arg}}},
          {"active_terms", {{"p1", g.term1}, {"p2", g.term2}, {"p3", g.term3}}},
          {"p1", number(g.p1)},
          {"p2", number(g.p2)},
          {"p3", number(g.p3)},
          {"omega(u,w)", number(g.omega_u)},
          {"omega(-u,w)", number(g.omega_minus_u)},
          {"sigma(u,w)", number(g.sigma_u)},
          {"sigma(-u,w)", number(g.sigma_minus_u)},
          {"radicand(u,w)", g.radicand_u},
          {"radicand(-u,w)", g.radicand_minus_u},
          {"domain_violations", g.domain_violations}};
}

json result_json(const ConditionalResult& r) {
  json j{{"value", number(r.value)},
         {"method", to_string(r.method)},
         {"error_bound", number(r.error_bound)},
         {"validity", to_string(r.validity)}};
  if (r.point_limit) j["point_limit"] = true;
  if (r.method == Method::ClosedForm) j["diagnostics"] = diagnostics_json(r.diagnostics);
  return j;
}

// ---- triad / survey input -------------------------------------------------

Rational exact_probability(const json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number()) return rational_from_double(v.get<double>());
  throw UsageError("schema: " + where + " must be a number or a \"p/q\" string");
}

json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    text = os.str();
  } else {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("schema: malformed JSON: ") + e.what());
  }
}

TriadData parse_triad(const json& j) {
  if (!j.is_object() || !j.contains("marg") || !j["marg"].is_object()) {
    throw UsageError("schema: triad needs an object \"marg\"");
  }
  TriadData t;
  for (const auto& [key, value] : j["marg"].items()) {
    t.marginals[parse_literal(key).event] = exact_probability(value, "marg." + key);
  }
  if (j.contains("cond")) {
    if (!j["cond"].is_array()) throw UsageError("schema: \"cond\" must be an array");
    for (const auto& c : j["cond"]) {
      if (!c.is_object() || !c.contains("event") || !c.contains("given") || !c.contains("p") ||
          !c["event"].is_string() || !c["given"].is_string()) {
        throw UsageError("schema: each cond entry needs string \"event\", \"given\" and \"p\"");
      }
      t.conditionals.push_back({parse_literal(c["event"].get<std::string>()),
                                parse_literal(c["given"].get<std::string>()), exact_probability(c["p"], "cond.p")});
    }
  }
  t.validate();
  return t;
}

double fraction_field(const json& q, const char* key, std::size_t index) {
  if (!q.contains(key) || !q[key].is_number()) {
    throw UsageError("schema: questions[" + std::to_string(index) + "]." + key + " must be a number");
  }
  return q[key].get<double>();
}

struct SurveyInput {
  std::vector<QuestionStats> questions;
  std::vector<double> angles_deg;
};

SurveyInput parse_survey(const json& j) {
  if (!j.is_object() || !j.contains("questions") || !j["questions"].is_array() || j["questions"].empty()) {
    throw UsageError("schema: survey needs a nonempty array \"questions\"");
  }
  SurveyInput in;
  std::size_t i = 0;
  for (const auto& q : j["questions"]) {
    if (!q.is_object()) throw UsageError("schema: each question must be an object");
    QuestionStats s;
    s.label = q.value("label", "q" + std::to_string(i));
    s.yes_fraction = fraction_field(q, "yes", i);
    s.predetermined_yes = fraction_field(q, "pre_yes", i);
    s.predetermined_no = fraction_field(q, "pre_no", i);
    in.questions.push_back(s);
    ++i;
  }
  if (j.contains("angles_deg")) {
    if (!j["angles_deg"].is_array()) throw UsageError("schema: \"angles_deg\" must be an array");
    for (const auto& a : j["angles_deg"]) {
      if (!a.is_number()) throw UsageError("schema: \"angles_deg\" entries must be numbers");
      in.angles_deg.push_back(a.get<double>());
    }
  } else {
    for (std::size_t k = 0; k < in.questions.size(); ++k) in.angles_deg.push_back(60.0 * static_cast<double>(k));
  }
  if (in.angles_deg.size() != in.questions.size()) {
    throw UsageError("schema: \"angles_deg\" needs one angle per question");
  }
  return in;
}

json rational_json(const Rational& r) { return format_rational(r); }

json kolmogorov_json(const KolmogorovVerdict& v) {
  json j{{"kolmogorov", v.feasible ? "feasible" : "infeasible"}};
  if (v.witness) {
    json w = json::object();
    for (std::size_t a = 0; a < kAtoms; ++a) w[atom_label(a)] = rational_json((*v.witness)[a]);
    j["witness"] = w;
  }
  if (v.certificate) {
    const auto& c = *v.certificate;
    j["certificate"] = {{"expression", c.expression},
                        {"lower", rational_json(c.lower)},
                        {"upper", rational_json(c.upper)},
                        {"lower_decimal", to_double(c.lower)},
                        {"upper_decimal", to_double(c.upper)}};
  }
  return j;
}

json hilbert_json(const HilbertVerdict& h) {
  json j{{"hilbert", h.feasible ? "feasible" : "infeasible"},
         {"gamma2", rational_json(h.gamma2)},
         {"delta2", rational_json(h.delta2)},
         {"required_cosine", rational_json(h.required_cosine)},
         {"required_cosine_decimal", to_double(h.required_cosine)}};
  if (h.witness) {
    json dirs = json::array();
    for (const auto& d : h.witness->directions) dirs.push_back({d.x(), d.y(), d.z()});
    j["witness"] = {{"bloch_directions", dirs}, {"max_residual", h.witness->max_residual}};
  }
  return j;
}

json constraints_json(const TriadData& t) {
  json arr = json::array();
  for (const auto& c : joint_constraints(t)) arr.push_back({{"label", c.label}, {"rhs", rational_json(c.rhs)}});
  return arr;
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// ---- subcommands ----------------------------------------------------------

struct Common {
  bool degrees = false;
};

struct ProbArgs {
  double epsilon = 1.0;
  double d = 0.0;
  StateFlags state;
};

int cmd_prob(const ProbArgs& a, const Common& c, std::ostream& out) {
  const auto [u, v] = a.state.resolve(c.degrees);
  const EpsilonExperiment e = EpsilonExperiment::make(u, a.epsilon, a.d);
  const OutcomeDistribution p = outcome_probabilities(e, v);
  write_json(out, {{"epsilon", a.epsilon}, {"d", a.d}, {"x", u.dot(v)}, {"p1", p.p1}, {"p2", p.p2}});
  return kOk;
}

struct SimulateArgs {
  ProbArgs prob;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
  if (a.trials == 0) throw UsageError("--trials must be positive");
  const Seed seed = resolve_seed(a.seed);
  const auto [u, v] = a.prob.state.resolve(c.degrees);
  const EpsilonExperiment e = EpsilonExperiment::make(u, a.prob.epsilon, a.prob.d);
  const Estimate est = estimate_probability_mc(e, v, a.trials, seed.value);
  write_json(out, {{"epsilon", a.prob.epsilon},
                   {"d", a.prob.d},
                   {"x", u.dot(v)},
                   {"estimate", est.estimate},
                   {"std_error", est.std_error},
                   {"exact_p1", outcome_probabilities(e, v).p1},
                   {"metadata", metadata(seed, a.trials)}});
  return kOk;
}

struct ConditionalArgs {
  double epsilon = 1.0;
  double alpha = 0.0;
  double d = 0.0;
  double c = 0.0;
  std::string method = "quad";
  double tol = kDefaultConditionalTol;
  std::uint64_t trials = 100000;
  std::optional<std::uint64_t> seed;
  int target_outcome = 1;
  int condition_outcome = 1;
};

int cmd_conditional(const ConditionalArgs& a, const Common& c, std::ostream& out) {
  const double alpha = a.alpha * (c.degrees ? kDegree : 1.0);
  if (!(alpha >= 0.0 && alpha <= kPi + 1e-12)) throw UsageError("--alpha must lie in [0, pi]");
  const double clamped = std::min(alpha, kPi);
  json j{{"epsilon", a.epsilon}, {"alpha", clamped}, {"d", a.d}, {"c", a.c},
         {"target_outcome", outcome_name(parse_outcome(a.target_outcome))},
         {"condition_outcome", outcome_name(parse_outcome(a.condition_outcome))}};
  const UnitVector w = UnitVector::north();
  const UnitVector u = UnitVector::from_spherical(clamped, 0.0);
  const ConditionalQuery q =
      ConditionalQuery::make(EpsilonExperiment::make(u, a.epsilon, a.d), EpsilonExperiment::make(w, a.epsilon, a.c),
                             parse_outcome(a.target_outcome), parse_outcome(a.condition_outcome));
  if (a.method == "quad") {
    j["result"] = result_json(conditional_quad(q, a.tol));
  } else if (a.method == "mc") {
    if (a.trials == 0) throw UsageError("--trials must be positive");
    const Seed seed = resolve_seed(a.seed);
    j["result"] = result_json(conditional_mc(q, a.trials, seed.value));
    j["metadata"] = metadata(seed, a.trials);
  } else {
    if (a.d != 0.0 || a.c != 0.0) throw UsageError("the closed form is defined for d = c = 0 only");
    if (a.target_outcome != 1 || a.condition_outcome != 1) {
      throw UsageError("the closed form gives P(o1 | o1) only");
    }
    j["result"] = result_json(conditional_closed_form(a.epsilon, clamped));
  }
  write_json(out, j);
  return kOk;
}

struct SweepArgs {
  std::vector<double> epsilons;
  std::size_t alpha_steps = 181;
  std::string out_path;
  double tol = kDefaultConditionalTol;
  std::uint64_t mc_trials = 20000;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const Seed seed = resolve_seed(a.seed);
  SweepOptions opts;
  opts.tol = a.tol;
  opts.mc_trials = a.mc_trials;
  opts.seed = seed.value;
  opts.threads = a.threads;
  const std::vector<SweepRow> rows = sweep(a.epsilons, a.alpha_steps, opts);

  std::ofstream file;
  if (!a.out_path.empty()) {
    file.open(a.out_path);
    if (!file) {
      err << "error: cannot write " << a.out_path << '\n';
      return kIoFailure;
    }
  }
  std::ostream& csv = a.out_path.empty() ? out : file;
  csv << "epsilon,alpha,p_quad,p_closed_form,validity,p_mc,mc_stderr\n";
  for (const auto& r : rows) {
    csv << format_number(r.epsilon) << ',' << format_number(r.alpha) << ',' << format_number(r.p_quad) << ','
        << format_number(r.p_closed_form) << ',' << to_string(r.validity) << ','
        << (std::isnan(r.p_mc) ? "" : format_number(r.p_mc)) << ','
        << (std::isnan(r.mc_stderr) ? "" : format_number(r.mc_stderr)) << '\n';
  }
  json summary{{"rows", rows.size()}, {"metadata", metadata(seed, a.mc_trials)}};
  if (!a.out_path.empty()) {
    summary["out"] = a.out_path;
    write_json(out, summary);
  } else {
    write_json(err, summary);
  }
  return kOk;
}

struct CheckArgs {
  std::string input;
  std::optional<std::string> gamma2;
};

int cmd_check_kolmogorov(const CheckArgs& a, std::ostream& out) {
  const TriadData t = parse_triad(read_json(a.input));
  json j = kolmogorov_json(check_kolmogorov(t));
  j["constraints"] = constraints_json(t);
  write_json(out, j);
  return kOk;
}

int cmd_check_hilbert(const CheckArgs& a, std::ostream& out) {
  if (!a.gamma2) throw UsageError("--gamma2 is required");
  write_json(out, hilbert_json(check_hilbert2d(parse_rational(*a.gamma2))));
  return kOk;
}

int cmd_check_classify(const CheckArgs& a, std::ostream& out) {
  const TriadData t = parse_triad(read_json(a.input));
  Rational gamma2;
  if (a.gamma2) {
    gamma2 = parse_rational(*a.gamma2);
  } else if (!t.conditionals.empty()) {
    gamma2 = t.conditionals.front().p;
  } else {
    throw UsageError("--gamma2 is required when the triad has no conditionals");
  }
  const KolmogorovVerdict k = check_kolmogorov(t);
  const HilbertVerdict h = check_hilbert2d(gamma2);
  json j{{"classification", to_string(classify(k, h))}};
  j.update(kolmogorov_json(k));
  j.update(hilbert_json(h));
  write_json(out, j);
  return kOk;
}

struct SurveyArgs {
  std::string input;
  std::optional<double> force_epsilon;
  std::uint64_t census_samples = 1'000'000;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

int cmd_survey(const SurveyArgs& a, std::ostream& out) {
  const SurveyInput in = parse_survey(read_json(a.input));
  std::vector<double> angles;
  for (double deg : in.angles_deg) angles.push_back(deg * kDegree);
  const SurveyModel m = SurveyModel::build(in.questions, angles, a.force_epsilon);

  json fitted = json::array();
  for (const auto& q : m.questions) {
    fitted.push_back({{"label", q.label},
                      {"fitted_epsilon", q.fit.epsilon},
                      {"fitted_d", q.fit.d},
                      {"predicted_yes", q.fit.predicted_yes},
                      {"yes_mismatch", q.fit.yes_mismatch},
                      {"model_d", q.experiment.d()}});
  }
  json j{{"questions", fitted},
         {"model", {{"epsilon", m.epsilon}, {"forced", a.force_epsilon.has_value()}, {"angles_deg", in.angles_deg}}},
         {"warnings", m.warnings}};

  json table = json::array();
  for (const auto& p : predict_conditionals(m)) {
    table.push_back({{"target", m.questions[p.target].label},
                     {"given", m.questions[p.condition].label},
                     {"angle", p.angle},
                     {"yes|yes", p.yes_given_yes},
                     {"no|yes", p.no_given_yes},
                     {"yes|no", p.yes_given_no},
                     {"no|no", p.no_given_no}});
  }
  j["conditionals"] = table;

  if (m.questions.size() == 3) {
    const Seed seed = resolve_seed(a.seed);
    if (a.census_samples > 0) {
      const RegionCensus census = region_census(m, a.census_samples, seed.value, a.threads);
      json regions = json::array();
      for (const auto& r : census.regions) {
        if (r.count == 0) continue;
        json labels = json::object();
        for (std::size_t q = 0; q < 3; ++q) labels[m.questions[q].label] = to_string(r.opinions[q]);
        regions.push_back({{"opinions", labels}, {"fraction", r.fraction}, {"std_error", r.std_error}});
      }
      j["census"] = {{"nonempty_regions", census.nonempty()}, {"regions", regions},
                     {"metadata", metadata(seed, a.census_samples)}};
    }
    const SurveyClassification cls = classify_survey(m);
    json c{{"classification", to_string(cls.classification)},
           {"triad",
            {{"marg",
              {{"U", rational_json(cls.triad.marginals.at(Event::U))},
               {"V", rational_json(cls.triad.marginals.at(Event::V))},
               {"W", rational_json(cls.triad.marginals.at(Event::W))}}}}}};
    json conds = json::array();
    for (const auto& d : cls.triad.conditionals) {
      conds.push_back({{"event", to_string(d.event)}, {"given", to_string(d.given)}, {"p", rational_json(d.p)},
                       {"p_decimal", to_double(d.p)}});
    }
    c["triad"]["cond"] = conds;
    c.update(kolmogorov_json(cls.kolmogorov));
    if (cls.hilbert) c.update(hilbert_json(*cls.hilbert));
    j["classification"] = c;
  }
  write_json(out, j);
  return kOk;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sphere-model quantum machine: probabilities, simulation, conditional "
               "probabilities and embeddability checks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--degrees", common.degrees, "read angle flags in degrees");

  ProbArgs prob;
  auto* prob_cmd = app.add_subcommand("prob", "exact outcome probabilities for a pure state");
  prob_cmd->add_option("--epsilon", prob.epsilon, "width parameter")->required()->check(CLI::Range(0.0, 1.0));
  prob_cmd->add_option("--d", prob.d, "band offset")->check(CLI::Range(-1.0, 1.0));
  prob.state.add_to(prob_cmd);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "seeded hidden-measurement trials");
  sim_cmd->add_option("--epsilon", sim.prob.epsilon, "width parameter")->required()->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--d", sim.prob.d, "band offset")->check(CLI::Range(-1.0, 1.0));
  sim.prob.state.add_to(sim_cmd);
  sim_cmd->add_option("--trials", sim.trials, "number of trials")->required();
  sim_cmd->add_option("--seed", sim.seed, "random seed (default: $QMACHINE_SEED)");

  ConditionalArgs cond;
  auto* cond_cmd = app.add_subcommand("conditional", "conditional probability P(u, w, mu)");
  cond_cmd->add_option("--epsilon", cond.epsilon, "width parameter")->required()->check(CLI::Range(0.0, 1.0));
  cond_cmd->add_option("--alpha", cond.alpha, "angle between u and w")->required();
  cond_cmd->add_option("--d", cond.d, "offset of the target experiment")->check(CLI::Range(-1.0, 1.0));
  cond_cmd->add_option("--c", cond.c, "offset of the conditioning experiment")->check(CLI::Range(-1.0, 1.0));
  cond_cmd->add_option("--method", cond.method, "quad, mc or formula")
      ->check(CLI::IsMember({"quad", "mc", "formula"}));
  cond_cmd->add_option("--tol", cond.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  cond_cmd->add_option("--trials", cond.trials, "Monte Carlo trials");
  cond_cmd->add_option("--seed", cond.seed, "random seed (default: $QMACHINE_SEED)");
  cond_cmd->add_option("--target-outcome", cond.target_outcome, "1 or 2")->check(CLI::IsMember({1, 2}));
  cond_cmd->add_option("--condition-outcome", cond.condition_outcome, "1 or 2")->check(CLI::IsMember({1, 2}));

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "conditional probability table over (epsilon, alpha) as CSV");
  sweep_cmd->add_option("--epsilons", sw.epsilons, "comma-separated epsilons")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--alpha-steps", sw.alpha_steps, "grid points on [0, pi]")->check(CLI::Range(2, 1000000));
  sweep_cmd->add_option("--out", sw.out_path, "CSV path (default stdout)");
  sweep_cmd->add_option("--tol", sw.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--mc-trials", sw.mc_trials, "Monte Carlo trials per row, 0 disables");
  sweep_cmd->add_option("--seed", sw.seed, "random seed (default: $QMACHINE_SEED)");
  sweep_cmd->add_option("--threads", sw.threads, "worker threads (0: all cores)");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Kolmogorov and 2-D Hilbert embeddability");
  check_cmd->require_subcommand(1);
  auto* kolmo_cmd = check_cmd->add_subcommand("kolmogorov", "joint-distribution feasibility of a triad");
  kolmo_cmd->add_option("--input", check.input, "triad JSON file or - for stdin")->required();
  auto* hilbert_cmd = check_cmd->add_subcommand("hilbert", "symmetric 2-D Hilbert model condition");
  hilbert_cmd->add_option("--gamma2", check.gamma2, "adjacent transition probability")->required();
  auto* classify_cmd = check_cmd->add_subcommand("classify", "both checks combined");
  classify_cmd->add_option("--input", check.input, "triad JSON file or - for stdin")->required();
  classify_cmd->add_option("--gamma2", check.gamma2, "defaults to the first conditional");

  SurveyArgs survey;
  auto* survey_cmd = app.add_subcommand("survey", "fit an opinion poll and classify it");
  survey_cmd->add_option("--input", survey.input, "survey JSON file or - for stdin")->required();
  survey_cmd->add_option("--force-epsilon", survey.force_epsilon, "use this epsilon for every question")
      ->check(CLI::Range(0.0, 1.0));
  survey_cmd->add_option("--census-samples", survey.census_samples, "region census draws, 0 disables");
  survey_cmd->add_option("--seed", survey.seed, "random seed (default: $QMACHINE_SEED)");
  survey_cmd->add_option("--threads", survey.threads, "worker threads (0: all cores)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*prob_cmd) return cmd_prob(prob, common, out);
    if (*sim_cmd) return cmd_simulate(sim, common, out);
    if (*cond_cmd) return cmd_conditional(cond, common, out);
    if (*sweep_cmd) return cmd_sweep(sw, out, err);
    if (*kolmo_cmd) return cmd_check_kolmogorov(check, out);
    if (*hilbert_cmd) return cmd_check_hilbert(check, out);
    if (*classify_cmd) return cmd_check_classify(check, out);
    if (*survey_cmd) return cmd_survey(survey, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const ConditioningError& e) {
    err << "conditioning error: " << e.what() << '\n';
    return kDomain;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kNumeric;
  }
  return kUsage;
}

}  // namespace qmachine::cli
