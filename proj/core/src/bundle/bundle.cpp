#include "mwf/bundle/bundle.hpp"

#include <algorithm>
#include <set>

namespace mwf::bundle {

namespace {

struct Bounds {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
};

void tighten(Bounds& into, const Interval& iv) {
  if (iv.lo && (!into.lo || *iv.lo > *into.lo)) into.lo = iv.lo;
  if (iv.hi && (!into.hi || *iv.hi < *into.hi)) into.hi = iv.hi;
}

bool nonempty(const std::vector<const CoverChart*>& charts) {
  std::set<std::string> coords;
  for (const CoverChart* c : charts) {
    for (const Interval& iv : c->box) coords.insert(iv.coordinate);
  }
  for (const std::string& coord : coords) {
    Bounds b;
    for (const CoverChart* c : charts) {
      for (const Interval& iv : c->box) {
        if (iv.coordinate == coord) tighten(b, iv);
      }
    }
    if (b.lo && b.hi && !(*b.lo < *b.hi)) return false;
  }
  return true;
}

const DifferentialForm& potential_of(const Bundle& b, const std::string& chart) {
  for (const LocalPotential& p : b.potentials) {
    if (p.chart == chart) return p.A;
  }
  throw BundleError("chart '" + chart + "' has no potential");
}

DifferentialForm d_scalar(const Chart& chart, const Poly& f) {
  return ext_d(DifferentialForm::scalar(chart, f));
}

}  // namespace

void validate(const Bundle& b) {
  if (b.charts.empty()) throw BundleError("bundle has no charts");
  std::set<std::string> names;
  for (const CoverChart& c : b.charts) {
    if (!names.insert(c.name).second) throw BundleError("duplicate chart '" + c.name + "'");
    for (const Interval& iv : c.box) {
      if (!b.base.coordinate_index(iv.coordinate)) {
        throw BundleError("chart '" + c.name + "' constrains unknown coordinate '" + iv.coordinate + "'");
      }
    }
    if (!nonempty({&c})) throw BundleError("chart '" + c.name + "' has an empty region");
  }
  for (const std::string& name : names) {
    const auto n = std::count_if(b.potentials.begin(), b.potentials.end(),
                                 [&](const LocalPotential& p) { return p.chart == name; });
    if (n != 1) throw BundleError("chart '" + name + "' needs exactly one potential");
  }
  for (const LocalPotential& p : b.potentials) {
    if (!names.count(p.chart)) throw BundleError("potential for unknown chart '" + p.chart + "'");
    if (!(p.A.chart() == b.base)) throw ChartMismatch("potential on '" + p.chart + "' is on the wrong chart");
    if (p.A.degree() != 1) throw DegreeError("potential on '" + p.chart + "' must be a 1-form");
  }
  for (const Transition& t : b.transitions) {
    if (!names.count(t.to) || !names.count(t.from)) {
      throw BundleError("transition between unknown charts '" + t.to + "' and '" + t.from + "'");
    }
  }
}

bool overlaps(const CoverChart& a, const CoverChart& b) { return nonempty({&a, &b}); }

bool overlaps(const CoverChart& a, const CoverChart& b, const CoverChart& c) { return nonempty({&a, &b, &c}); }

Poly transition(const Bundle& b, const std::string& v, const std::string& u) {
  for (const Transition& t : b.transitions) {
    if (t.to == v && t.from == u) return t.lambda;
  }
  for (const Transition& t : b.transitions) {
    if (t.to == u && t.from == v) return -t.lambda;
  }
  throw MissingTransition("no transition declared between '" + u + "' and '" + v + "'");
}

ConnectionReport cocycle_check(const Bundle& b) {
  validate(b);
  ConnectionReport rep;
  rep.is_connection = true;
  const auto& cs = b.charts;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (!overlaps(cs[i], cs[j])) continue;
      const std::string& u = cs[i].name;
      const std::string& v = cs[j].name;
      DifferentialForm r = potential_of(b, v) - potential_of(b, u) + d_scalar(b.base, transition(b, v, u));
      const ZeroStatus s = zero_status(r);
      rep.is_connection = rep.is_connection && s == ZeroStatus::ProvenZero;
      rep.overlaps.push_back({u, v, std::move(r), s});
    }
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      for (std::size_t k = j + 1; k < cs.size(); ++k) {
        if (!overlaps(cs[i], cs[j], cs[k])) continue;
        const std::string& u = cs[i].name;
        const std::string& v = cs[j].name;
        const std::string& w = cs[k].name;
        const Poly defect = transition(b, w, u) - transition(b, w, v) - transition(b, v, u);
        const ZeroStatus s = zero_status(d_scalar(b.base, defect));
        rep.is_connection = rep.is_connection && s == ZeroStatus::ProvenZero;
        rep.triples.push_back({u, v, w, s});
      }
    }
  }
  return rep;
}

DifferentialForm curvature(const DifferentialForm& A) {
  if (A.degree() != 1) throw DegreeError("a gauge potential must be a 1-form");
  const DifferentialForm bracket = wedge(A, A);
  if (zero_status(bracket) != ZeroStatus::ProvenZero) throw std::logic_error("[A, A] does not vanish");
  return ext_d(A) + bracket;
}

CurvatureReport curvature_agreement(const Bundle& b) {
  validate(b);
  CurvatureReport rep;
  rep.agree = true;
  const auto& cs = b.charts;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (!overlaps(cs[i], cs[j])) continue;
      DifferentialForm r = curvature(potential_of(b, cs[i].name)) - curvature(potential_of(b, cs[j].name));
      const ZeroStatus s = zero_status(r);
      rep.agree = rep.agree && s == ZeroStatus::ProvenZero;
      rep.overlaps.push_back({cs[i].name, cs[j].name, std::move(r), s});
    }
  }
  if (rep.agree) rep.F = curvature(potential_of(b, cs.front().name));
  return rep;
}

Bundle gauge_chart(Bundle b, const std::string& chart, const Poly& lambda0) {
  validate(b);
  for (LocalPotential& p : b.potentials) {
    if (p.chart == chart) p.A = p.A + d_scalar(b.base, lambda0);
  }
  // A_V = A_U - dLambda_VU with A_U -> A_U + dLambda0 needs Lambda_VU -> Lambda_VU + Lambda0.
  for (Transition& t : b.transitions) {
    if (t.from == chart && t.to != chart) t.lambda = t.lambda + lambda0;
    if (t.to == chart && t.from != chart) t.lambda = t.lambda - lambda0;
  }
  return b;
}

}  // namespace mwf::bundle
