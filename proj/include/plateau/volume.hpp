#pragma once

#include <array>
#include <string>
#include <vector>

#include "plateau/convex.hpp"
#include "plateau/seminorm.hpp"

namespace plateau {

enum class VolumeDefinition { Busemann, HolmesThompson, MassStar, InscribedEllipse };

inline constexpr std::array<VolumeDefinition, 4> kAllVolumes = {
    VolumeDefinition::Busemann, VolumeDefinition::HolmesThompson, VolumeDefinition::MassStar,
    VolumeDefinition::InscribedEllipse};

std::string volume_name(VolumeDefinition mu);
VolumeDefinition volume_from_name(const std::string& name);

// Jacobian of mu on the identity seminorm of the given norm, computed from
// the polygonal unit-ball model and memoized per (mu, norm).
double norm_constant(VolumeDefinition mu, const NormDescriptor& n, int ball_verts = 4096);

// mu-Jacobian of a seminorm: 0 when degenerate, otherwise
// |det A| * norm_constant(mu, base).
double mu_jacobian(VolumeDefinition mu, const Seminorm2& s);

// Direct polygonal evaluation (no |det A| factorization); used for
// cross-checks and the normalization cache itself.
double mu_jacobian_polygonal(VolumeDefinition mu, const Seminorm2& s, int ball_verts = 4096);

struct QuasiConvexityReport {
    int trials = 0;
    int violations = 0;
    double base_volume = 0.0;   // volume of the affine map on the disc mesh
    double min_margin = 0.0;    // min over trials of Vol(psi) - Vol(L)
    double tolerance = 0.0;     // violation threshold actually used
};

// Perturbs the affine map L : R^2 -> (R^2, norm) by random interior vertex
// displacements on a disc mesh, keeping the boundary fixed, and checks
// Vol_mu(psi) >= Vol_mu(L) - tol.
QuasiConvexityReport quasi_convexity_test(VolumeDefinition mu, const Mat2& L,
                                          const NormDescriptor& norm, int trials, int mesh_level,
                                          std::uint64_t seed);

}  // namespace plateau
