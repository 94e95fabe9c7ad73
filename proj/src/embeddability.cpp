#include "qmachine/embeddability.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qmachine/errors.hpp"
#include "qmachine/spin.hpp"

namespace qmachine {

namespace {

constexpr std::size_t kMaxRows = 200'000;

/// c . x >= b for inequalities, c . x == b for equalities.
struct Row {
  AtomVector c;
  Rational b;
};

struct System {
  std::vector<Row> eq;
  std::vector<Row> ineq;
};

bool is_constant(const Row& r) {
  return std::all_of(r.c.begin(), r.c.end(), [](const Rational& v) { return v == 0; });
}

Row combine(const Row& a, const Rational& fa, const Row& b, const Rational& fb) {
  Row r;
  for (std::size_t i = 0; i < kAtoms; ++i) r.c[i] = fa * a.c[i] + fb * b.c[i];
  r.b = fa * a.b + fb * b.b;
  return r;
}

/// Scales every inequality so its first nonzero coefficient is +-1 and keeps
/// only the strongest right-hand side per coefficient vector. Constant rows
/// keep only the largest right-hand side.
std::vector<Row> dedupe(std::vector<Row> rows) {
  std::map<AtomVector, Rational> best;
  for (Row& r : rows) {
    const auto lead = std::find_if(r.c.begin(), r.c.end(), [](const Rational& v) { return v != 0; });
    if (lead != r.c.end()) {
      const Rational scale = abs(*lead);
      for (auto& v : r.c) v /= scale;
      r.b /= scale;
    }
    auto [it, inserted] = best.emplace(r.c, r.b);
    if (!inserted && r.b > it->second) it->second = r.b;
  }
  std::vector<Row> out;
  for (auto& [c, b] : best) {
    if (std::all_of(c.begin(), c.end(), [](const Rational& v) { return v == 0; }) && b <= 0) continue;
    out.push_back({c, b});
  }
  return out;
}

/// What back-substitution needs to recover the eliminated variable.
struct Stage {
  std::size_t var;
  std::optional<Row> pivot;  // equality used for substitution
  std::vector<Row> bounds;   // inequalities involving var, before FM
};

/// Removes variable k. Substitutes through an equality when one involves k
/// and `substitute` is set, otherwise runs a Fourier-Motzkin step.
Stage eliminate(System& s, std::size_t k, bool substitute) {
  Stage stage{k, std::nullopt, {}};
  if (substitute) {
    const auto pivot = std::find_if(s.eq.begin(), s.eq.end(), [&](const Row& r) { return r.c[k] != 0; });
    if (pivot != s.eq.end()) {
      const Row p = *pivot;
      s.eq.erase(pivot);
      auto apply = [&](Row& r) {
        if (r.c[k] != 0) r = combine(r, Rational(1), p, Rational(-r.c[k] / p.c[k]));
      };
      std::for_each(s.eq.begin(), s.eq.end(), apply);
      std::for_each(s.ineq.begin(), s.ineq.end(), apply);
      s.ineq = dedupe(std::move(s.ineq));
      stage.pivot = p;
      return stage;
    }
  }
  std::vector<Row> keep_eq;
  for (const Row& r : s.eq) {
    if (r.c[k] == 0) {
      keep_eq.push_back(r);
    } else {
      s.ineq.push_back(r);
      s.ineq.push_back(combine(r, Rational(-1), r, Rational(0)));
    }
  }
  s.eq = std::move(keep_eq);
  std::vector<Row> pos, neg, next;
  for (const Row& r : s.ineq) {
    if (r.c[k] > 0) {
      pos.push_back(r);
    } else if (r.c[k] < 0) {
      neg.push_back(r);
    } else {
      next.push_back(r);
    }
  }
  if (pos.size() * neg.size() > kMaxRows) throw NumericError("Fourier-Motzkin step too large", 0.0);
  for (const Row& p : pos) {
    for (const Row& n : neg) next.push_back(combine(p, Rational(-n.c[k]), n, p.c[k]));
  }
  stage.bounds = pos;
  stage.bounds.insert(stage.bounds.end(), neg.begin(), neg.end());
  s.ineq = dedupe(std::move(next));
  return stage;
}

System initial_system(const TriadData& t) {
  System s;
  for (const auto& lc : joint_constraints(t)) s.eq.push_back({lc.coeffs, lc.rhs});
  for (std::size_t i = 0; i < kAtoms; ++i) {
    Row r;
    r.c[i] = 1;
    s.ineq.push_back(r);
  }
  return s;
}

bool constants_consistent(const System& s) {
  for (const Row& r : s.eq) {
    if (is_constant(r) && r.b != 0) return false;
  }
  for (const Row& r : s.ineq) {
    if (is_constant(r) && r.b > 0) return false;
  }
  return true;
}

Rational residual_value(const Row& r, const AtomVector& x, std::size_t skip) {
  Rational v = r.b;
  for (std::size_t j = 0; j < kAtoms; ++j) {
    if (j != skip) v -= r.c[j] * x[j];
  }
  return v;
}

AtomVector back_substitute(const std::vector<Stage>& stages) {
  AtomVector x;
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    const std::size_t k = it->var;
    if (it->pivot) {
      x[k] = residual_value(*it->pivot, x, k) / it->pivot->c[k];
      continue;
    }
    std::optional<Rational> lo, hi;
    for (const Row& r : it->bounds) {
      const Rational bound = residual_value(r, x, k) / r.c[k];
      if (r.c[k] > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else {
        if (!hi || bound < *hi) hi = bound;
      }
    }
    if (lo && hi) {
      x[k] = (*lo + *hi) / 2;
    } else if (lo) {
      x[k] = *lo;
    } else if (hi) {
      x[k] = *hi;
    }
  }
  return x;
}

struct Projection {
  std::optional<Rational> lower, upper;
  Rational constant_violation = 0;  // largest b in a constant row 0 >= b
};

Projection project_onto(const TriadData& t, std::size_t target) {
  System s = initial_system(t);
  for (std::size_t k = 0; k < kAtoms; ++k) {
    if (k != target) eliminate(s, k, false);
  }
  for (const Row& r : s.eq) {
    s.ineq.push_back(r);
    s.ineq.push_back(combine(r, Rational(-1), r, Rational(0)));
  }
  Projection p;
  for (const Row& r : s.ineq) {
    const Rational& c = r.c[target];
    if (c > 0) {
      const Rational v = r.b / c;
      if (!p.lower || v > *p.lower) p.lower = v;
    } else if (c < 0) {
      const Rational v = r.b / c;
      if (!p.upper || v < *p.upper) p.upper = v;
    } else if (r.b > p.constant_violation) {
      p.constant_violation = r.b;
    }
  }
  return p;
}

/// Among atoms whose projection conflicts through bounds alone, the one with
/// the widest gap; earliest atom on ties.
InfeasibilityCertificate certificate_for(const TriadData& t) {
  std::optional<InfeasibilityCertificate> best;
  Rational best_gap = 0;
  bool best_proper = false;
  Rational constant_violation = 0;
  for (std::size_t atom = 0; atom < kAtoms; ++atom) {
    Projection p;
    try {
      p = project_onto(t, atom);
    } catch (const NumericError&) {
      continue;
    }
    constant_violation = std::max(constant_violation, p.constant_violation);
    if (p.constant_violation > 0 || !p.lower || !p.upper || *p.lower <= *p.upper) continue;
    // Two bounds inside [0, 1] beat a clash with nonnegativity or total mass.
    const bool proper = *p.upper >= 0 && *p.lower <= 1;
    const Rational gap = *p.lower - *p.upper;
    if (!best || (proper && !best_proper) || (proper == best_proper && gap > best_gap)) {
      best = InfeasibilityCertificate{atom, "nu(" + atom_label(atom) + ")", *p.lower, *p.upper};
      best_gap = gap;
      best_proper = proper;
    }
  }
  if (best) return *best;
  return {std::nullopt, "0", constant_violation, Rational(0)};
}

Rational literal_measure(const TriadData& t, const Literal& l, bool& known) {
  const auto it = t.marginals.find(l.event);
  known = it != t.marginals.end();
  if (!known) return 0;
  return l.negated ? Rational(1 - it->second) : it->second;
}

char event_char(Event e) {
  switch (e) {
    case Event::U:
      return 'U';
    case Event::V:
      return 'V';
    case Event::W:
      return 'W';
  }
  return '?';
}

int event_bit(Event e) {
  switch (e) {
    case Event::U:
      return 2;
    case Event::V:
      return 1;
    case Event::W:
      return 0;
  }
  return 0;
}

}  // namespace

Literal parse_literal(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s.push_back(c);
  }
  bool negated = false;
  if (s.starts_with("not")) {
    negated = true;
    s = s.substr(3);
  } else if (s.ends_with("^c") || s.ends_with("^C")) {
    negated = true;
    s.resize(s.size() - 2);
  }
  if (s == "U" || s == "u") return {Event::U, negated};
  if (s == "V" || s == "v") return {Event::V, negated};
  if (s == "W" || s == "w") return {Event::W, negated};
  throw UsageError("unknown event '" + text + "'");
}

std::string to_string(const Literal& l) {
  return std::string(1, event_char(l.event)) + (l.negated ? "^c" : "");
}

void TriadData::validate() const {
  auto check = [](const Rational& p, const std::string& what) {
    if (p < 0 || p > 1) throw DomainError(what + " must lie in [0, 1]");
  };
  for (const auto& [e, m] : marginals) check(m, std::string("marginal of ") + event_char(e));
  for (const auto& c : conditionals) check(c.p, "P(" + to_string(c.event) + "|" + to_string(c.given) + ")");
}

TriadData TriadData::chain(const Rational& p_v_given_w, const Rational& p_u_given_w,
                           const Rational& p_not_u_given_v, const Rational& marginal) {
  TriadData t;
  t.marginals = {{Event::U, marginal}, {Event::V, marginal}, {Event::W, marginal}};
  t.conditionals = {{{Event::V, false}, {Event::W, false}, p_v_given_w},
                    {{Event::U, false}, {Event::W, false}, p_u_given_w},
                    {{Event::U, true}, {Event::V, false}, p_not_u_given_v}};
  return t;
}

std::string atom_label(std::size_t atom) {
  std::string out;
  for (Event e : {Event::U, Event::V, Event::W}) {
    if (!out.empty()) out += "∩";
    out += event_char(e);
    if (!((atom >> event_bit(e)) & 1u)) out += "^c";
  }
  return out;
}

bool atom_in(std::size_t atom, const Literal& l) {
  const bool in = (atom >> event_bit(l.event)) & 1u;
  return l.negated ? !in : in;
}

std::vector<LinearConstraint> joint_constraints(const TriadData& t) {
  t.validate();
  std::vector<LinearConstraint> out;
  LinearConstraint total;
  for (auto& c : total.coeffs) c = 1;
  total.rhs = 1;
  total.label = "total mass";
  out.push_back(total);
  for (const auto& [e, m] : t.marginals) {
    LinearConstraint lc;
    const Literal l{e, false};
    for (std::size_t a = 0; a < kAtoms; ++a) lc.coeffs[a] = atom_in(a, l) ? 1 : 0;
    lc.rhs = m;
    lc.label = std::string("nu(") + event_char(e) + ")";
    out.push_back(lc);
  }
  for (const auto& c : t.conditionals) {
    LinearConstraint lc;
    bool known = false;
    const Rational given = literal_measure(t, c.given, known);
    for (std::size_t a = 0; a < kAtoms; ++a) {
      Rational coeff = (atom_in(a, c.event) && atom_in(a, c.given)) ? 1 : 0;
      if (!known && atom_in(a, c.given)) coeff -= c.p;
      lc.coeffs[a] = coeff;
    }
    lc.rhs = known ? Rational(c.p * given) : Rational(0);
    lc.label = "nu(" + to_string(c.event) + "∩" + to_string(c.given) + ")";
    out.push_back(lc);
  }
  return out;
}

KolmogorovVerdict check_kolmogorov(const TriadData& t) {
  System s = initial_system(t);
  std::vector<Stage> stages;
  for (std::size_t k = 0; k < kAtoms; ++k) stages.push_back(eliminate(s, k, true));
  KolmogorovVerdict v;
  v.feasible = constants_consistent(s);
  if (v.feasible) {
    v.witness = back_substitute(stages);
  } else {
    v.certificate = certificate_for(t);
  }
  return v;
}

HilbertVerdict check_hilbert2d(const Rational& gamma2) {
  if (gamma2 <= 0 || gamma2 >= 1) {
    throw DomainError("gamma^2 must lie strictly between 0 and 1");
  }
  HilbertVerdict h;
  h.gamma2 = gamma2;
  h.delta2 = 1 - gamma2;
  const Rational& g = h.gamma2;
  const Rational& d = h.delta2;
  h.required_cosine = (d - d * d - g * g) / (2 * d * g);
  h.feasible = h.required_cosine >= -1 && h.required_cosine <= 1;
  if (h.feasible) {
    // Bloch picture: phi_1 -> psi_1 -> chi_1 -> phi_2 = -phi_1 in three steps
    // of angle theta with cos^2(theta/2) = gamma^2.
    const double theta = 2.0 * std::acos(std::sqrt(to_double(g)));
    const double ct = std::cos(theta);
    const double azimuth = std::acos(std::clamp(ct / (1.0 - ct), -1.0, 1.0));
    const UnitVector phi1 = UnitVector::north();
    const UnitVector psi1 = UnitVector::from_spherical(theta, 0.0);
    const UnitVector chi1 = UnitVector::from_spherical(kPi - theta, azimuth);
    const double gv = to_double(g);
    const double dv = to_double(d);
    double residual = 0.0;
    for (const auto& [a, b, expect] :
         {std::tuple{phi1, psi1, gv}, {psi1, chi1, gv}, {chi1, -phi1, gv}, {-phi1, -psi1, gv},
          {-psi1, -chi1, gv}, {-chi1, phi1, gv}, {phi1, -psi1, dv}, {psi1, -chi1, dv},
          {chi1, phi1, dv}, {-phi1, psi1, dv}, {-psi1, chi1, dv}, {-chi1, -phi1, dv}}) {
      residual = std::max(residual, std::abs(transition_probability(a, b) - expect));
    }
    h.witness = HilbertWitness{{phi1, psi1, chi1}, residual};
  }
  return h;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Kolmogorovian:
      return "kolmogorovian";
    case Classification::Hilbertian2D:
      return "hilbertian-2d";
    case Classification::Both:
      return "both";
    case Classification::Neither:
      return "neither";
  }
  return "?";
}

Classification classify(const KolmogorovVerdict& k, const HilbertVerdict& h) {
  if (k.feasible && h.feasible) return Classification::Both;
  if (k.feasible) return Classification::Kolmogorovian;
  if (h.feasible) return Classification::Hilbertian2D;
  return Classification::Neither;
}

Classification classify(const TriadData& t, const Rational& gamma2) {
  return classify(check_kolmogorov(t), check_hilbert2d(gamma2));
}

}  // namespace qmachine
