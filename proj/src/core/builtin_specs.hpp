#pragma once

#include <string>
#include <vector>

#include "flow_lab.hpp"
#include "lie_core.hpp"
#include "rng.hpp"

namespace uniflow::runner {

struct GroupCatalogEntry {
  flow::DiscreteGroupSpec spec;
  std::string description;
};

const std::vector<GroupCatalogEntry>& builtin_groups();
flow::DiscreteGroupSpec builtin_group(const std::string& name);
bool has_builtin_group(const std::string& name);

lie::SpecPtr algebra_by_name(const std::string& name);
std::vector<std::string> algebra_names();

/// Integer l_M default for a spec: product over factors of (2 for sl(2,R),
/// 4 for sl(2,C)).
int default_l_m(const lie::SpecPtr& spec);

/// Unipotent direction "E in every factor" for a spec.
lie::AlgebraVector upper_direction(const lie::SpecPtr& spec);

// Randomized desk-scale instances, shared by the runner and the test suites.
lattice::LatticeBasis random_lattice(Rng& rng, int dim, int rank, double scale_lo = 1.0,
                                     double scale_hi = 1.0);
Eigen::MatrixXd random_nilpotent_matrix(Rng& rng, int dim);
lie::AlgebraVector random_nilpotent_direction(Rng& rng, const lie::SpecPtr& spec);
lie::FloatGroupElement random_basepoint(Rng& rng, const lie::SpecPtr& spec, double spread = 0.6);

}  // namespace uniflow::runner
