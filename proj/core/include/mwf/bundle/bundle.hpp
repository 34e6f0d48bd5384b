#pragma once

// U(1) principal bundles over a flat chart: local potentials glued by phase
// transition functions g_VU = exp(i Lambda_VU).
//
// Sign convention: A_V = A_U - dLambda_VU on the overlap of U and V, so the
// compatibility residual is A_V - A_U + dLambda_VU and Lambda_UV = -Lambda_VU.

#include "mwf/forms/form.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwf::bundle {

/// Open interval lo < x < hi on one coordinate; a missing bound is infinite.
struct Interval {
  std::string coordinate;
  std::optional<Rational> lo;
  std::optional<Rational> hi;
};

struct CoverChart {
  std::string name;
  std::vector<Interval> box;  // coordinates not listed are unconstrained
};

struct LocalPotential {
  std::string chart;
  DifferentialForm A;
};

/// Lambda_{to,from}: A_to = A_from - dLambda on the overlap.
struct Transition {
  std::string to;
  std::string from;
  Poly lambda;
};

struct Bundle {
  Chart base = Chart::euclidean3();
  std::vector<CoverChart> charts;
  std::vector<LocalPotential> potentials;
  std::vector<Transition> transitions;
};

class BundleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingTransition : public BundleError {
 public:
  using BundleError::BundleError;
};

/// Throws BundleError for empty regions, unknown coordinates, duplicate names,
/// or charts without exactly one degree-1 potential on the base chart.
void validate(const Bundle& b);

bool overlaps(const CoverChart& a, const CoverChart& b);
bool overlaps(const CoverChart& a, const CoverChart& b, const CoverChart& c);

/// Lambda_VU, taken from the transition list directly or as -Lambda_UV.
/// Throws MissingTransition if neither direction is declared.
Poly transition(const Bundle& b, const std::string& v, const std::string& u);

struct OverlapResult {
  std::string u;
  std::string v;
  DifferentialForm residual;
  ZeroStatus status = ZeroStatus::Unknown;
};

struct TripleResult {
  std::string u;
  std::string v;
  std::string w;
  ZeroStatus status = ZeroStatus::Unknown;  // d(Lambda_WU - Lambda_WV - Lambda_VU)
};

struct ConnectionReport {
  std::vector<OverlapResult> overlaps;  // residual = A_V - A_U + dLambda_VU
  std::vector<TripleResult> triples;
  bool is_connection = false;
};

ConnectionReport cocycle_check(const Bundle& b);

/// dA + [A, A]. The bracket is computed as A^A and must vanish for a real-valued A.
DifferentialForm curvature(const DifferentialForm& A);

struct CurvatureReport {
  std::vector<OverlapResult> overlaps;  // residual = dA_U - dA_V
  bool agree = false;
  std::optional<DifferentialForm> F;  // the common curvature when every overlap agrees
};

CurvatureReport curvature_agreement(const Bundle& b);

/// Replaces A_U by A_U + dLambda0 and adjusts every transition touching U to match.
Bundle gauge_chart(Bundle b, const std::string& chart, const Poly& lambda0);

}  // namespace mwf::bundle
