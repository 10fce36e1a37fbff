#pragma once

#include "plateau/conformal.hpp"
#include "plateau/plmap.hpp"

namespace plateau {

enum class FunctionalKind { EnergyPlus, EnergyKS, AreaMu, AreaMuRegularized };

struct PlateauProblem {
    TargetSpace target;
    JordanBoundary boundary;
    int mesh_level = 4;
    FunctionalKind functional = FunctionalKind::EnergyPlus;
    VolumeDefinition mu = VolumeDefinition::Busemann;
    // three pinned boundary points: domain angle on the circle -> curve parameter
    std::array<double, 3> pin_domain_angles = {0.0, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0};
    std::array<double, 3> pin_params = {0.0, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0};
};

struct SolverConfig {
    int max_iters = 2000;       // per descent stage
    double tol_rel = 1e-9;      // relative decrease over the window stops
    int tol_window = 10;
    int grid_k = 64;            // direction grid for the smoothed max
    double beta = 32.0;         // softmax power
    double eps0 = 0.1;          // area regularization schedule
    double eps_ratio = 0.5;
    int eps_stages = 8;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 48;
    std::uint64_t seed = 17;
    bool hierarchical = true;   // warm-start from coarser levels
    int min_level = 2;
};

struct StageInfo {
    double eps = 0.0;
    double area = 0.0;
    double energy_plus = 0.0;
    int iters = 0;
};

struct SolveResult {
    explicit SolveResult(PLMap m) : map(std::move(m)) {}
    PLMap map;
    double energy_plus = 0.0;
    double energy_ks = 0.0;
    std::array<double, 4> area{};  // indexed like kAllVolumes
    QcReport qc;
    std::vector<double> trace;     // objective value per accepted iteration
    std::string termination;
    std::vector<double> boundary_params;
    std::vector<StageInfo> stages;
};

SolveResult minimize_energy(const PlateauProblem& problem, const SolverConfig& cfg);
SolveResult minimize_area(const PlateauProblem& problem, VolumeDefinition mu,
                          const SolverConfig& cfg);

struct VariationResult {
    double delta_energy_plus = 0.0;  // exact change through the deformation identity
    double direct_delta = 0.0;       // quadrature of the composed map, cross-check
    double c = 1.0, d = 0.0;
    bool injective = true;
    double conformal_outside_max_q = 1.0;
    double conformal_residual = 0.0;
    double boundary_roundtrip_error = 0.0;
};

// Inner variation through the glued deformation: affine T^{-1} on B(z0, r),
// conformal outside, pulled back to the disc through a numerically computed
// conformal map. T must have unit determinant.
VariationResult variation_test(const PLMap& u, const Vec2& z0, double r, const Mat2& T);

// Lipschitz filling of a closed curve in the sup-norm plane through the
// hemisphere: constant-speed reparametrization, then a per-coordinate
// maximal Lipschitz extension with constant length/(2 pi).
PLMap fill_injective(const JordanBoundary& curve, int mesh_level);

struct IsoperimetricProbe {
    std::vector<double> ratios;  // area / length^2 per curve
    double max_ratio = 0.0;
};

IsoperimetricProbe isoperimetric_probe(const std::vector<PlateauProblem>& problems,
                                       VolumeDefinition mu, const SolverConfig& cfg);

struct BiDiscReport {
    double window_lo = 0.0, window_hi = 0.0;  // admissible range for lambda^2
    double area_mu_u1 = 0.0, area_mu_u2 = 0.0;
    double area_nu_u1 = 0.0, area_nu_u2 = 0.0;
    int argmin_mu = 0, argmin_nu = 0;  // 1 or 2; 0 marks a tie within margin
    bool argmins_differ = false;
};

// Evaluates the two canonical fillings of the gluing circle under a pair of
// volume definitions. Throws ParameterOutOfWindow unless
// mu-constant < lambda^2 < nu-constant for the given norm.
BiDiscReport bi_disc_scenario(const NormDescriptor& norm, double lambda, VolumeDefinition mu,
                              VolumeDefinition nu, int mesh_level);

}  // namespace plateau
