#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmachine/rational.hpp"
#include "qmachine/sphere.hpp"

namespace qmachine {

enum class Event { U, V, W };

/// An event or its complement.
struct Literal {
  Event event;
  bool negated = false;

  bool operator==(const Literal&) const = default;
};

/// Parses "U", "not V", "W^c". Throws UsageError otherwise.
Literal parse_literal(const std::string& text);
std::string to_string(const Literal& l);

struct ConditionalDatum {
  Literal event;
  Literal given;
  Rational p;
};

/// Marginals of three events and conditionals between them, all exact.
struct TriadData {
  std::map<Event, Rational> marginals;
  std::vector<ConditionalDatum> conditionals;

  /// Throws DomainError unless every value lies in [0, 1].
  void validate() const;

  /// Marginals 1/2 and P(V|W), P(U|W), P(not U|V) as given; the layout of
  /// the three-question contradiction.
  static TriadData chain(const Rational& p_v_given_w, const Rational& p_u_given_w,
                         const Rational& p_not_u_given_v,
                         const Rational& marginal = Rational(1, 2));
};

/// Atom i is the intersection selected by the bits of i: bit 2 = U, bit 1 = V,
/// bit 0 = W, a clear bit meaning the complement.
inline constexpr std::size_t kAtoms = 8;
using AtomVector = std::array<Rational, kAtoms>;

std::string atom_label(std::size_t atom);
bool atom_in(std::size_t atom, const Literal& l);

/// coeffs . atoms == rhs.
struct LinearConstraint {
  AtomVector coeffs;
  Rational rhs;
  std::string label;
};

/// Total mass, one equation per marginal and per conditional
/// (nu(E and G) = p nu(G), with nu(G) substituted when it is a given
/// marginal). Nonnegativity of the atoms is implicit.
std::vector<LinearConstraint> joint_constraints(const TriadData& t);

/// lower <= nu(atom) <= upper with lower > upper. A conflict that no single
/// atom isolates is reported with atom = nullopt as 0 >= lower.
struct InfeasibilityCertificate {
  std::optional<std::size_t> atom;
  std::string expression;
  Rational lower;
  Rational upper;
};

struct KolmogorovVerdict {
  bool feasible = false;
  std::optional<AtomVector> witness;
  std::optional<InfeasibilityCertificate> certificate;
};

/// Exact feasibility over the eight-atom simplex by Fourier-Motzkin
/// elimination. A feasible verdict carries atoms that satisfy every
/// constraint exactly; an infeasible one the contradictory bound pair.
KolmogorovVerdict check_kolmogorov(const TriadData& t);

/// Three Bloch directions whose bases {psi(n), psi(-n)} realize the
/// symmetric transition table.
struct HilbertWitness {
  std::array<UnitVector, 3> directions;  // phi_1, psi_1, chi_1
  double max_residual;
};

struct HilbertVerdict {
  bool feasible = false;
  Rational gamma2;
  Rational delta2;
  Rational required_cosine;
  std::optional<HilbertWitness> witness;
};

/// Three orthonormal bases of C^2 with |<phi1,psi1>|^2 = |<psi1,chi1>|^2 =
/// |<chi1,phi2>|^2 = gamma2 exist iff the cosine the phases must satisfy,
/// (delta^2 - delta^4 - gamma^4) / (2 delta^2 gamma^2), lies in [-1, 1].
/// Throws DomainError for gamma2 outside (0, 1).
HilbertVerdict check_hilbert2d(const Rational& gamma2);

enum class Classification { Kolmogorovian, Hilbertian2D, Both, Neither };
std::string to_string(Classification c);

Classification classify(const TriadData& t, const Rational& gamma2);
Classification classify(const KolmogorovVerdict& k, const HilbertVerdict& h);

}  // namespace qmachine
