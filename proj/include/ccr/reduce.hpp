#pragma once

#include <string>
#include <vector>

#include "ccr/symspace.hpp"

namespace ccr {

struct ReductionResult {
  Subspace constraints;
  Subspace commutant;
  QuotientSpace quotient;
  bool firstClass = false;
  bool doubleCommutant = false;
  bool nondegenerate = false;
  int physicalDim = 0;
};

// Throws FirstClassViolation for second-class input.
ReductionResult t_reduce(const Subspace& s);

bool equivalent_constraints(const Subspace& s1, const Subspace& s2);

struct MaximalResult {
  Subspace maximal;
  std::string notes;
};
// Sweeps coordinate directions and bounded integer combinations of them.
MaximalResult maximal_linear_constraints(const Subspace& s, int bound = 2);

struct StagedResult {
  std::vector<Subspace> chain;
  std::vector<QuotientSpace> stages;  // each in the previous stage's coordinates
  QuotientSpace finalQuotient;        // last stage
  Mat finalForm;                      // factored form after the last stage
  Mat projectAll;                     // ambient -> final representatives
  Mat liftAll;                        // final representatives -> ambient
  ReductionResult single;
  Mat isoToSingle;                    // final staged reps -> single reps
  double isoResidual = 0;             // max |iso^T F_single iso - F_staged|
  bool isoInvertible = false;
};

StagedResult reduce_by_stages(const std::vector<Subspace>& chain);

struct GlobalLocalReport {
  Subspace o0, se, k0;
  QuotientSpace r0;
  ReductionResult re;
  Mat injection;  // R0 reps -> Re reps
  double formResidual = 0;
  bool injective = false;
  bool onto = false;
  int dimR0 = 0, dimRe = 0;
};

GlobalLocalReport global_vs_local(const std::vector<Subspace>& localObservables,
                                  const std::vector<Subspace>& localConstraints);

}  // namespace ccr
