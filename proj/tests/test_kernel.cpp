#include <doctest.h>

#include <cmath>
#include <memory>

#include "slglue/errors.hpp"
#include "slglue/kernel.hpp"
#include "slglue/summation.hpp"

using namespace slglue;

namespace {

GluedMesh make_mesh(int level, double eps = 0.05) {
    Eigen::VectorXd a(3);
    a << 1.0, 1.0, 1.0;
    auto neck = std::make_shared<Neck>(NeckParams{a});
    GlueProfile profile;
    profile.eps = eps;
    TorusLattice lattice = TorusLattice::cubic(3, 10.0, neck->phases().phi);
    MeshResolution res;
    res.sphere_level = level;
    return GluedMesh(profile, neck, lattice, res);
}

}  // namespace

TEST_CASE("equal vertex values give the constant kernel element") {
    GluedMesh mesh = make_mesh(2);
    const double k = 2.5;
    const KernelElement w = kernel_element(mesh, Eigen::Vector2d(k, k));
    for (double v : w.values) CHECK(v == doctest::Approx(k).epsilon(1e-15));
    CHECK(w.outer_values[0] == k);
    CHECK(w.outer_values[1] == k);
    // integrating the constant field recovers k times the total volume
    mesh.compute_metric();
    const std::vector<double> ones(mesh.samples().size(), 1.0);
    const double integral =
        project(mesh, w.values, ones, w.outer_values, Eigen::Vector2d(1.0, 1.0));
    CHECK(integral / (mesh.V1() + mesh.V2()) == doctest::Approx(k).epsilon(1e-6));
}

TEST_CASE("kernel element ramps between the vertex values across the neck") {
    GluedMesh mesh = make_mesh(2);
    const Eigen::Vector2d d(-1.0, 2.0);
    const KernelElement w = kernel_element(mesh, d);
    CHECK(w.outer_values[0] == -1.0);
    CHECK(w.outer_values[1] == 2.0);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < w.values.size(); ++i) {
        lo = std::min(lo, w.values[i]);
        hi = std::max(hi, w.values[i]);
    }
    // never overshoots the vertex values
    CHECK(lo >= -1.0 - 1e-12);
    CHECK(hi <= 2.0 + 1e-12);
    // the far plane samples sit at the vertex values
    for (const auto& s : mesh.samples()) {
        const std::size_t i = static_cast<std::size_t>(&s - mesh.samples().data());
        if (s.region == Region::QMinus && s.frak_r > 2.5)
            CHECK(w.values[i] == doctest::Approx(-1.0).epsilon(1e-12));
        if (s.region == Region::QPlus && s.frak_r > 2.5)
            CHECK(w.values[i] == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("normalized kernel is orthogonal to constants with unit cap") {
    GluedMesh mesh = make_mesh(2);
    mesh.compute_metric();
    const KernelElement raw = kernel_element(mesh, Eigen::Vector2d(-1.0, 2.0));
    const KernelElement w = normalize_kernel(mesh, raw);
    // the stored mean is the raw weighted mean that was subtracted
    CHECK(w.mean > -1.0);
    CHECK(w.mean < 2.0);
    CHECK(w.normL2 > 0.0);

    // projection onto the constant weight vanishes after normalization
    const std::vector<double> ones(mesh.samples().size(), 1.0);
    const double ip = project(mesh, w.values, ones, w.outer_values,
                              Eigen::Vector2d(1.0, 1.0));
    CHECK(std::abs(ip) / (mesh.V1() + mesh.V2()) <= 1e-12);

    // unit-gap element keeps values inside [0,1] before centring
    const KernelElement unit = kernel_element(mesh, Eigen::Vector2d(0.0, 1.0));
    const KernelElement wn = normalize_kernel(mesh, unit);
    double sup = 0.0;
    for (double v : wn.values) sup = std::max(sup, std::abs(v));
    sup = std::max({sup, std::abs(wn.outer_values[0]), std::abs(wn.outer_values[1])});
    CHECK(sup <= 1.0 + 1e-9);
}

TEST_CASE("matching field is the tip ramp continued below the band") {
    GluedMesh mesh = make_mesh(2);
    mesh.compute_metric();
    // constants of the two-vertex matching at the given rate
    const double V1 = mesh.V1(), V2 = mesh.V2();
    const double c_L = mesh.neck().c_plus();
    const double deps2 = -0.01;
    const Eigen::Vector2d constants(-deps2 * c_L * V2 / (V1 + V2),
                                    deps2 * c_L * V1 / (V1 + V2));
    // below the band the plane value reduces to deps2 * beta(s) + C_1 for
    // both ends, which is exactly the tip formula: the field is seamless
    double worst = 0.0;
    int tested = 0;
    for (const auto& s : mesh.samples()) {
        if (s.region != Region::QMinus && s.region != Region::QPlus) continue;
        if (s.frak_r > 0.3) continue;
        const End end = s.region == Region::QPlus ? End::Plus : End::Minus;
        const auto gs =
            mesh.neck().graph_sample(end, s.x, s.frak_r / mesh.profile().eps);
        const double expect = deps2 * mesh.neck().beta(gs.s) + constants[0];
        worst = std::max(worst,
                         std::abs(xi_zero(mesh, constants, deps2, s) - expect));
        ++tested;
    }
    CHECK(tested > 0);
    CHECK(worst <= 1e-8);
    // outer components carry the bare constants
    for (const auto& s : mesh.samples()) {
        if (s.region == Region::Outer1)
            CHECK(xi_zero(mesh, constants, deps2, s) == constants[0]);
        if (s.region == Region::Outer2)
            CHECK(xi_zero(mesh, constants, deps2, s) == constants[1]);
    }
}

TEST_CASE("eps-derivative of the interpolated potential matches the dilation law") {
    GluedMesh mesh = make_mesh(2);
    const GlueProfile& p = mesh.profile();
    Eigen::VectorXd sigma(3);
    sigma << 1.0, 0.0, 0.0;
    const double frak_r = 0.4;
    const double dq = q_eps_derivative(p, mesh.neck(), End::Minus, sigma, frak_r);
    // independent central difference with a different step
    const double h = 1e-5 * p.eps;
    GlueProfile pp = p, pm = p;
    pp.eps = p.eps + h;
    pm.eps = p.eps - h;
    const double fd = (q_potential(pp, mesh.neck(), End::Minus, sigma, frak_r) -
                       q_potential(pm, mesh.neck(), End::Minus, sigma, frak_r)) /
                      (2.0 * h);
    CHECK(dq == doctest::Approx(fd).epsilon(1e-6));
    // below the band the derivative has the exact form 2 eps (c_end - beta)
    const auto gs = mesh.neck().graph_sample(End::Minus, sigma, frak_r / p.eps);
    const double law = 2.0 * p.eps * (0.0 - mesh.neck().beta(gs.s));
    CHECK(dq == doctest::Approx(law).epsilon(1e-6));
}

TEST_CASE("frozen-neck projection balances against the closed form") {
    GluedMesh mesh = make_mesh(2);
    const double A = mesh.neck().phases().A;
    const double c_L = mesh.neck().c_plus();
    const double V1 = mesh.V1(), V2 = mesh.V2();

    const ProjectionReport rep = balancing_projection(mesh, 0.0);
    CHECK(rep.eps == mesh.profile().eps);
    // the stored mean is the raw weighted average of the (0,1) element
    const KernelElement raw = kernel_element(mesh, Eigen::Vector2d(0.0, 1.0));
    const std::vector<double> ones(mesh.samples().size(), 1.0);
    const double quad_volume =
        project(mesh, ones, ones, Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(1.0, 1.0));
    const double raw_mean =
        project(mesh, raw.values, ones, raw.outer_values, Eigen::Vector2d(1.0, 1.0)) /
        quad_volume;
    CHECK(rep.kernel_mean == doctest::Approx(raw_mean).epsilon(1e-12));
    CHECK(rep.kernel_mean > 0.0);
    CHECK(rep.kernel_mean < 1.0);
    CHECK(std::abs(rep.pi_1) <= 1e-10);
    // frozen neck: the closed form reduces to the pure volume term
    const double expect =
        c_L * V1 * V2 / (V1 + V2) *
        (A / c_L) * (V1 + V2) / (V1 * V2) * std::pow(rep.eps, 3);
    CHECK(rep.closed_form == doctest::Approx(expect).epsilon(1e-12));
    CHECK(rep.pi_w > 0.0);
    CHECK(rep.residual == doctest::Approx(rep.pi_w - rep.closed_form).epsilon(1e-14));
}
