#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdr/feasibility.hpp"
#include "sdr/pencil.hpp"

namespace sdr {

struct ConstructionReport {
  int output_dim = 0;
  int visible_count = 0;
  int auxiliary_count = 0;
  std::string provenance;
};

ConstructionReport describe(const SemidefRepresentation& s);

/// S intersected with {l = 0}; the equality is encoded as paired 1x1 blocks
/// l >= 0 and -l >= 0. No new auxiliaries.
SemidefRepresentation exposed_face(const SemidefRepresentation& s,
                                   const AffineFunctional& l);

/// S with the exposed face S cap {l = 0} removed, i.e. S cap {l > 0} via
/// the gadget [[lambda, 1], [1, l(x)]]. One fresh auxiliary; dim + 2.
SemidefRepresentation remove_exposed_face(const SemidefRepresentation& s,
                                          const AffineFunctional& l,
                                          FreshNames& names);

/// Relative interior of the denoted set. Adds auxiliaries (delta, lambda1,
/// lambda2) and exactly 4 to the pencil dimension. z, when supplied, must be
/// a relative-interior point of the lifted spectrahedron (checked against
/// sampled feasible points); otherwise one is computed by interior_point.
SemidefRepresentation relative_interior(
    const SemidefRepresentation& s, FreshNames& names, const EngineConfig& cfg,
    const std::optional<Assignment>& z = std::nullopt);

/// { x in S | ker A(x) subset of W } for a spectrahedron S, via the Albert
/// block [[A(x), B^t], [B, lambda I]] with the rows of B an orthonormal
/// basis of the orthogonal complement of W. W = R^k returns S unchanged.
SemidefRepresentation kernel_containment(const SemidefRepresentation& s,
                                         const Subspace& w, FreshNames& names);

/// (T loop-arrow S): the union of relative interiors of all faces of S that
/// meet T. Spectrahedron case: [[A(x), A(z)], [A(z), lambda I]] (+) B_T(z,u)
/// with z a fresh copy of the ambient variables. General S is handled on its
/// lift and projected back.
SemidefRepresentation looparrow(const SemidefRepresentation& t,
                                const SemidefRepresentation& s,
                                FreshNames& names);

/// Intersection: block-diagonal sum with auxiliaries kept disjoint.
SemidefRepresentation intersect(const std::vector<SemidefRepresentation>& parts,
                                FreshNames& names);

/// Coordinate projection: moves the dropped visibles into the auxiliaries.
SemidefRepresentation project(const SemidefRepresentation& s,
                              const std::vector<std::string>& keep);

/// Closed convex hull of the union, by the perspective split x = u + v with
/// homogenized pencils at t and 1 - t. Exact for compact inputs; unbounded
/// inputs may gain recession directions.
SemidefRepresentation conv_union(const SemidefRepresentation& a,
                                 const SemidefRepresentation& b,
                                 FreshNames& names);

}  // namespace sdr
