#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "slglue/glue_profile.hpp"
#include "slglue/lattice.hpp"
#include "slglue/lawlor.hpp"

namespace slglue {

enum class Region { Tip, QMinus, QPlus, Outer1, Outer2 };

// The value Q of the interpolated potential over the plane of `end` at
// geometric radius frak_r: the dilated neck potential cut off to vanish
// beyond 2 eps^tau.
double q_potential(const GlueProfile& profile, const Neck& neck, End end,
                   const Eigen::VectorXd& sigma, double frak_r);

// Sample counts are fixed by these knobs: the sphere rule contributes
// nodes(level) directions, each tip ray carries tip_panels*gauss nodes, and
// each plane carries (deep+pre+band+flat panels)*gauss radial nodes plus
// outer_ring seam probes.
struct MeshResolution {
    int sphere_level = 6;
    int tip_panels = 5;
    int deep_panels = 4;
    int pre_panels = 2;
    int band_panels = 4;
    int flat_panels = 2;
    int gauss = 6;
    int outer_ring = 4;
    long expected_samples(int sphere_nodes) const;
};

struct MeshSample {
    Region region = Region::Tip;
    // tip: (s, x) on the unit neck; Q: x = sigma, r = static radius,
    // frak_r = kappa(r); outer ring probes carry qweight 0
    double s = 0.0;
    double r = 0.0;
    double frak_r = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd ambient;  // stacked (Re z, Im z), reduced mod Gamma
    double qweight = 0.0;     // coordinate measure weight (no metric factor)
    bool band = false;        // inside the gluing band (eps^tau, 2 eps^tau)
    Eigen::MatrixXd metric;   // m x m in intrinsic coordinates
    double sqrt_det_g = 0.0;
    double theta = 0.0;
    double normA = 0.0;
    double rho = 0.0;  // weight profile value
};

class GluedMesh {
  public:
    GluedMesh(GlueProfile profile, std::shared_ptr<const Neck> neck, TorusLattice lattice,
              MeshResolution resolution = {});

    const GlueProfile& profile() const { return profile_; }
    const Neck& neck() const { return *neck_; }
    const TorusLattice& lattice() const { return lattice_; }
    const std::vector<MeshSample>& samples() const { return samples_; }
    std::vector<MeshSample>& samples() { return samples_; }
    int dim() const { return m_; }

    double V1() const { return lattice_.V1(); }
    double V2() const { return lattice_.V2(); }
    // torus volume of component b minus the meshed disk of radius (1-hbar)R2
    double outer_volume(int component) const;

    // ambient chart maps (stacked real coordinates, not reduced)
    Eigen::VectorXd tip_point(double s, const Eigen::VectorXd& x) const;
    Eigen::VectorXd plane_chart(End end, const Eigen::VectorXd& plane_x) const;
    double scalar_potential(End end, const Eigen::VectorXd& plane_x) const;

    // field computations; h is a relative finite-difference step
    void compute_metric(double h_rel = 1e-4);
    void compute_theta(double h_rel = 5e-3);
    void compute_norm_a(double h_rel = 5e-3);

    // orthonormal tangent basis of the unit sphere at x, deterministic
    static Eigen::MatrixXd sphere_tangent_basis(const Eigen::VectorXd& x);

    // analytic induced metric of the unit neck at (s, x) in the coordinates
    // (s, tangent basis); reference for the tip samples
    Eigen::MatrixXd neck_metric(double s, const Eigen::VectorXd& x,
                                const Eigen::MatrixXd& tangent) const;

  private:
    void build();
    Eigen::VectorXd ambient_of(const MeshSample& sample) const;
    Eigen::MatrixXd jacobian(const MeshSample& sample, double h_rel) const;

    GlueProfile profile_;
    std::shared_ptr<const Neck> neck_;
    TorusLattice lattice_;
    MeshResolution res_;
    int m_ = 0;
    std::vector<MeshSample> samples_;
};

}  // namespace slglue
