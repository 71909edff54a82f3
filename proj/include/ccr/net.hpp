#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccr/symspace.hpp"

namespace ccr {

struct GroupAction {
  std::string name;
  std::map<int, int> regionMap;  // partial: regions outside the map are not acted on
  Mat V;                         // linear map on the global space
};

class RegionPoset {
 public:
  // leq pairs (a, b) mean a <= b; reflexive pairs are added. Spacelike pairs are symmetrized.
  RegionPoset(std::vector<std::string> regions, std::vector<std::pair<int, int>> leq,
              std::vector<std::pair<int, int>> spacelike = {});

  int size() const { return int(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  bool leq(int a, int b) const { return leq_.count({a, b}) > 0; }
  bool spacelike(int a, int b) const { return space_.count({a, b}) > 0; }
  // Strictly ordered pairs a < b.
  std::vector<std::pair<int, int>> strict_pairs() const;
  // Unordered spacelike pairs with a < b.
  std::vector<std::pair<int, int>> spacelike_pairs() const;
  int index(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::set<std::pair<int, int>> leq_, space_;
};

// Gauge data for field-level causality: profiles h supported in each region and the
// coefficient c(f, h) for field vectors f in real coordinates.
struct GaugeData {
  std::map<int, std::vector<CVec>> profiles;
  std::function<cplx(const Vec&, const CVec&)> coeff;
  std::function<double(const CVec&)> profileNorm;
};

class LocalNet {
 public:
  LocalNet(RegionPoset poset, SpacePtr space);

  const RegionPoset& poset() const { return poset_; }
  const SpacePtr& space() const { return space_; }

  void set_region(int b, Subspace X, Subspace s);
  // Constraint span entering o(B); defaults to s(B).
  void set_total_constraints(Subspace total) { sTotal_ = std::move(total); }
  // o(B) = X(B) n ker(C); overrides the commutant of the total constraints when set.
  void set_observable_condition(SpMat c) { cond_ = std::move(c); }
  void set_gauge(GaugeData g) { gauge_ = std::move(g); }

  const Subspace& X(int b) const;
  const Subspace& s(int b) const;
  const Subspace& o(int b) const;  // cached observable_space
  const std::optional<Subspace>& total_constraints() const { return sTotal_; }
  const std::optional<GaugeData>& gauge() const { return gauge_; }
  const std::optional<SpMat>& observable_condition() const { return cond_; }

 private:
  RegionPoset poset_;
  SpacePtr space_;
  std::map<int, Subspace> X_, s_;
  mutable std::map<int, Subspace> o_;
  std::optional<Subspace> sTotal_;
  std::optional<GaugeData> gauge_;
  std::optional<SpMat> cond_;
};

Subspace observable_space(const LocalNet& net, int b);

struct CheckEntry {
  std::string what;
  int a = -1, b = -1;
  double residual = 0;
  bool pass = true;
};

struct NetReport {
  std::string check;
  bool pass = true;
  double maxResidual = 0;
  double tolerance = 0;
  std::vector<CheckEntry> entries;
  std::string note;
  void add(CheckEntry e);
};

NetReport check_isotony(const LocalNet& net, double tol = 1e-8);
NetReport check_reduction_isotony(const LocalNet& net, double tol = 1e-8);
NetReport check_weak_causality(const LocalNet& net, double tol);
// Reports a witness |c(f,h)| / (|f| |h|) > threshold; note "NoWitnessFound" otherwise.
NetReport check_field_causality_violation(const LocalNet& net, double threshold);
NetReport check_covariance(const LocalNet& net, const std::vector<GroupAction>& actions,
                           double tol = 1e-10);
// Local quotients o(B)/(o(B) n S) and their inclusion maps; checks i13 = i23 i12 and
// vanishing reduced pairings for spacelike regions.
NetReport check_quotient_functoriality(const LocalNet& net, double tol = 1e-10);

}  // namespace ccr
