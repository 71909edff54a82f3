#include "ccr/net.hpp"

#include <algorithm>
#include <sstream>

#include "ccr/reduce.hpp"

namespace ccr {

RegionPoset::RegionPoset(std::vector<std::string> regions, std::vector<std::pair<int, int>> leq,
                         std::vector<std::pair<int, int>> spacelike)
    : names_(std::move(regions)) {
  const int n = size();
  auto check = [n](int a, int b) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("poset: region index out of range");
  };
  for (int i = 0; i < n; ++i) leq_.insert({i, i});
  for (auto [a, b] : leq) {
    check(a, b);
    leq_.insert({a, b});
  }
  for (auto [a, b] : leq_)
    if (a != b && leq_.count({b, a})) throw std::invalid_argument("poset: order is not antisymmetric");
  for (auto [a, b] : leq_)
    for (auto [c, d] : leq_)
      if (b == c && !leq_.count({a, d})) throw std::invalid_argument("poset: order is not transitive");
  for (auto [a, b] : spacelike) {
    check(a, b);
    if (leq_.count({a, b}) || leq_.count({b, a}))
      throw std::invalid_argument("poset: spacelike pair is comparable");
    space_.insert({a, b});
    space_.insert({b, a});
  }
}

std::vector<std::pair<int, int>> RegionPoset::strict_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (auto [a, b] : leq_)
    if (a != b) out.push_back({a, b});
  return out;
}

std::vector<std::pair<int, int>> RegionPoset::spacelike_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (auto [a, b] : space_)
    if (a < b) out.push_back({a, b});
  return out;
}

int RegionPoset::index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::invalid_argument("unknown region '" + name + "'");
  return int(it - names_.begin());
}

LocalNet::LocalNet(RegionPoset poset, SpacePtr space)
    : poset_(std::move(poset)), space_(std::move(space)) {}

void LocalNet::set_region(int b, Subspace X, Subspace s) {
  if (b < 0 || b >= poset_.size()) throw std::invalid_argument("set_region: unknown region");
  if (!subspace_contains(X, s)) throw std::invalid_argument("set_region: s(B) is not inside X(B)");
  X_[b] = std::move(X);
  s_[b] = std::move(s);
  o_.clear();
}

const Subspace& LocalNet::X(int b) const {
  auto it = X_.find(b);
  if (it == X_.end()) throw std::invalid_argument("unknown region " + std::to_string(b));
  return it->second;
}

const Subspace& LocalNet::s(int b) const {
  auto it = s_.find(b);
  if (it == s_.end()) throw std::invalid_argument("unknown region " + std::to_string(b));
  return it->second;
}

const Subspace& LocalNet::o(int b) const {
  auto it = o_.find(b);
  if (it != o_.end()) return it->second;
  return o_[b] = observable_space(*this, b);
}

Subspace observable_space(const LocalNet& net, int b) {
  const Subspace& X = net.X(b);
  if (net.observable_condition()) {
    if (X.rank() == 0) return X;
    Mat cond = *net.observable_condition() * X.basis();
    Mat z = null_space(cond, kRankTol, 1.0);
    if (z.cols() == 0) return Subspace::zero(net.space());
    return Subspace(net.space(), X.basis() * z);
  }
  const Subspace& S = net.total_constraints() ? *net.total_constraints() : net.s(b);
  if (X.rank() == 0 || S.rank() == 0) return X;
  const auto& sp = net.space();
  Mat cond = (sp->form() * S.basis()).transpose() * X.basis();
  Mat z = null_space(cond, kRankTol, std::max(1.0, sp->scale()));
  if (z.cols() == 0) return Subspace::zero(sp);
  return Subspace(sp, X.basis() * z);
}

void NetReport::add(CheckEntry e) {
  maxResidual = std::max(maxResidual, e.residual);
  if (!e.pass) pass = false;
  entries.push_back(std::move(e));
}

NetReport check_isotony(const LocalNet& net, double tol) {
  NetReport r;
  r.check = "isotony";
  r.tolerance = tol;
  for (auto [a, b] : net.poset().strict_pairs()) {
    double rx = net.X(a).rank() ? projection_residual(net.X(b).basis(), net.X(a).basis()) : 0.0;
    r.add({"X(B1) in X(B2)", a, b, rx, rx <= tol});
    Subspace meet = subspace_intersect(net.s(b), net.X(a));
    bool eq = subspace_equal(net.s(a), meet, tol);
    double rs = std::max(net.s(a).rank() ? projection_residual(meet.basis(), net.s(a).basis()) : 0.0,
                         meet.rank() ? projection_residual(net.s(a).basis(), meet.basis()) : 0.0);
    if (!eq && rs <= tol) rs = 1.0;  // rank mismatch
    r.add({"s(B1) = s(B2) n X(B1)", a, b, rs, eq});
  }
  return r;
}

NetReport check_reduction_isotony(const LocalNet& net, double tol) {
  NetReport r;
  r.check = "reduction_isotony";
  r.tolerance = tol;
  const auto& sp = net.space();
  for (auto [a, b] : net.poset().strict_pairs()) {
    const Subspace& oa = net.o(a);
    double ro = oa.rank() ? projection_residual(net.o(b).basis(), oa.basis()) : 0.0;
    r.add({"o(B1) in o(B2)", a, b, ro, ro <= tol});
    double pc = 0;
    if (oa.rank() && net.s(b).rank()) pc = max_abs(cross_form(sp, oa.basis(), net.s(b).basis()));
    r.add({"B(o(B1), s(B2)) = 0", a, b, pc, pc <= tol * std::max(1.0, sp->scale())});
  }
  return r;
}

NetReport check_weak_causality(const LocalNet& net, double tol) {
  NetReport r;
  r.check = "weak_causality";
  r.tolerance = tol;
  auto pairs = net.poset().spacelike_pairs();
  if (pairs.empty()) {
    r.pass = false;
    r.note = "no spacelike pairs";
    return r;
  }
  for (auto [a, b] : pairs) {
    const Subspace& oa = net.o(a);
    const Subspace& ob = net.o(b);
    double m = (oa.rank() && ob.rank()) ? max_abs(cross_form(net.space(), oa.basis(), ob.basis())) : 0.0;
    r.add({"max |B(o(B1), o(B2))|", a, b, m, m <= tol});
  }
  return r;
}

NetReport check_field_causality_violation(const LocalNet& net, double threshold) {
  NetReport r;
  r.check = "field_causality_violation";
  r.tolerance = threshold;
  r.pass = false;
  if (!net.gauge()) {
    r.note = "NoWitnessFound: net carries no gauge data";
    return r;
  }
  const auto& g = *net.gauge();
  double best = 0;
  CheckEntry bestEntry;
  for (auto [a, b] : net.poset().spacelike_pairs()) {
    for (auto [u, v] : {std::pair{a, b}, std::pair{b, a}}) {
      auto it = g.profiles.find(v);
      if (it == g.profiles.end()) continue;
      const Mat& X = net.X(u).basis();
      for (Eigen::Index k = 0; k < X.cols(); ++k)
        for (const auto& h : it->second) {
          double hn = g.profileNorm(h);
          if (hn == 0) continue;
          double c = std::abs(g.coeff(X.col(k), h)) / hn;  // X columns are unit vectors
          if (c > best) {
            best = c;
            bestEntry = {"|c(f,h)| with f in X(B1), h supported in B2", u, v, c, c > threshold};
          }
        }
    }
  }
  if (best > threshold) {
    r.pass = true;
    r.add(bestEntry);
    r.note = "witness found";
  } else {
    r.note = "NoWitnessFound";
    r.maxResidual = best;
  }
  return r;
}

NetReport check_covariance(const LocalNet& net, const std::vector<GroupAction>& actions, double tol) {
  NetReport r;
  r.check = "covariance";
  r.tolerance = tol;
  const auto& sp = net.space();
  Mat F = sp->dense_form();
  for (std::size_t ai = 0; ai < actions.size(); ++ai) {
    const auto& act = actions[ai];
    if (act.V.rows() != sp->dim() || act.V.cols() != sp->dim())
      throw std::invalid_argument("check_covariance: action map has the wrong shape");
    double sym = max_abs(act.V.transpose() * F * act.V - F);
    r.add({act.name + ": V^T F V = F", int(ai), -1, sym, sym <= tol * std::max(1.0, max_abs(F))});
    for (auto [from, to] : act.regionMap) {
      if (from < 0 || to < 0 || from >= net.poset().size() || to >= net.poset().size())
        throw std::invalid_argument("check_covariance: action not defined on region");
      Subspace vx = subspace_image(act.V, net.X(from));
      bool okx = subspace_equal(vx, net.X(to), 1e-8);
      double rx = vx.rank() ? projection_residual(net.X(to).basis(), vx.basis()) : 0.0;
      r.add({act.name + ": V X(B) = X(gB)", from, to, rx, okx});
      Subspace vs = subspace_image(act.V, net.s(from));
      bool oks = equivalent_constraints(vs, net.s(to));
      double rs = vs.rank() ? projection_residual(net.s(to).basis(), vs.basis()) : 0.0;
      r.add({act.name + ": V s(B) ~ s(gB)", from, to, rs, oks});
      Subspace vo = subspace_image(act.V, net.o(from));
      bool oko = subspace_equal(vo, net.o(to), 1e-8);
      double ro = vo.rank() ? projection_residual(net.o(to).basis(), vo.basis()) : 0.0;
      r.add({act.name + ": V o(B) = o(gB)", from, to, ro, oko});
    }
  }
  return r;
}

NetReport check_quotient_functoriality(const LocalNet& net, double tol) {
  NetReport r;
  r.check = "quotient_functoriality";
  r.tolerance = tol;
  const auto& sp = net.space();
  const int n = net.poset().size();
  Subspace total = Subspace::zero(sp);
  if (net.total_constraints())
    total = *net.total_constraints();
  else
    for (int b = 0; b < n; ++b) total = subspace_sum(total, net.s(b));
  std::vector<QuotientSpace> q(n);
  for (int b = 0; b < n; ++b) q[b] = quotient(net.o(b), subspace_intersect(net.o(b), total));
  auto iota = [&](int a, int b) -> Mat { return q[b].project * q[a].lift; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (a == b || b == c || !net.poset().leq(a, b) || !net.poset().leq(b, c)) continue;
        double d = max_abs(iota(a, c) - iota(b, c) * iota(a, b));
        r.add({"i13 = i23 i12 via " + net.poset().names()[b], a, c, d, d <= tol});
      }
  for (auto [a, b] : net.poset().strict_pairs()) {
    Mat i = iota(a, b);
    double d = max_abs(i.transpose() * q[b].factoredForm * i - q[a].factoredForm);
    r.add({"i12 preserves reduced form", a, b, d, d <= tol});
  }
  for (auto [a, b] : net.poset().spacelike_pairs()) {
    double d = (q[a].repDim && q[b].repDim) ? max_abs(cross_form(sp, q[a].lift, q[b].lift)) : 0.0;
    r.add({"reduced pairing of spacelike regions", a, b, d, true});
  }
  return r;
}

}  // namespace ccr
