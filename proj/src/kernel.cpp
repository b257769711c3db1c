#include "slglue/kernel.hpp"

#include <cmath>

#include "slglue/errors.hpp"
#include "slglue/graph.hpp"
#include "slglue/summation.hpp"

namespace slglue {

double kernel_fn(const GlueProfile& profile, const Neck& neck, const Eigen::Vector2d& d,
                 const MeshSample& sample) {
    switch (sample.region) {
        case Region::Outer1:
            return d[0];
        case Region::Outer2:
            return d[1];
        case Region::Tip:
            return d[0] + (d[1] - d[0]) * neck.beta(sample.s) / neck.c_plus();
        case Region::QMinus:
        case Region::QPlus: {
            const bool plus = sample.region == Region::QPlus;
            const double db = plus ? d[1] : d[0];
            const double t =
                cutoff_chi(2.0 * std::pow(profile.eps, -profile.tau) * sample.frak_r);
            if (t >= 1.0) return db;
            const auto gs = neck.graph_sample(plus ? End::Plus : End::Minus, sample.x,
                                              sample.frak_r / profile.eps);
            const double interp =
                d[0] + (d[1] - d[0]) * neck.beta(gs.s) / neck.c_plus();
            return db + (interp - db) * (1.0 - t);
        }
    }
    throw ConfigError("unknown sample region");
}

KernelElement kernel_element(const GluedMesh& mesh, const Eigen::Vector2d& d) {
    KernelElement el;
    el.d = d;
    el.outer_values = d;
    el.values.reserve(mesh.samples().size());
    for (const auto& smp : mesh.samples())
        el.values.push_back(kernel_fn(mesh.profile(), mesh.neck(), d, smp));
    return el;
}

KernelElement normalize_kernel(const GluedMesh& mesh, const KernelElement& raw) {
    const auto& samples = mesh.samples();
    if (raw.values.size() != samples.size())
        throw ConfigError("kernel element does not match the mesh");
    std::vector<double> vols(samples.size()), prods(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        vols[i] = samples[i].qweight * samples[i].sqrt_det_g;
        prods[i] = raw.values[i] * vols[i];
    }
    const double vo1 = mesh.outer_volume(1), vo2 = mesh.outer_volume(2);
    const double volume = pairwise_sum(vols) + vo1 + vo2;
    if (!(volume > 0.0)) throw NumericError("degenerate mesh volume");
    const double mean = (pairwise_sum(prods) + raw.outer_values[0] * vo1 +
                         raw.outer_values[1] * vo2) /
                        volume;

    KernelElement out = raw;
    out.mean = mean;
    for (auto& v : out.values) v -= mean;
    out.outer_values.array() -= mean;
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        sq[i] = out.values[i] * out.values[i] * vols[i];
    out.normL2 = std::sqrt(pairwise_sum(sq) + out.outer_values[0] * out.outer_values[0] * vo1 +
                           out.outer_values[1] * out.outer_values[1] * vo2);
    return out;
}

double q_eps_derivative(const GlueProfile& profile, const Neck& neck, End end,
                        const Eigen::VectorXd& sigma, double frak_r, double delta_rel) {
    const double delta = delta_rel * profile.eps;
    GlueProfile up = profile, dn = profile;
    up.eps += delta;
    dn.eps -= delta;
    return (q_potential(up, neck, end, sigma, frak_r) -
            q_potential(dn, neck, end, sigma, frak_r)) /
           (2.0 * delta);
}

double xi_zero(const GluedMesh& mesh, const Eigen::Vector2d& constants, double deps2_dt,
               const MeshSample& sample, double delta_rel) {
    switch (sample.region) {
        case Region::Tip:
            return deps2_dt * mesh.neck().beta(sample.s) + constants[0];
        case Region::Outer1:
            return constants[0];
        case Region::Outer2:
            return constants[1];
        case Region::QMinus:
        case Region::QPlus: {
            const bool plus = sample.region == Region::QPlus;
            const double eps_prime = deps2_dt / (2.0 * mesh.profile().eps);
            const double dq =
                q_eps_derivative(mesh.profile(), mesh.neck(),
                                 plus ? End::Plus : End::Minus, sample.x, sample.frak_r,
                                 delta_rel);
            return -eps_prime * dq + constants[plus ? 1 : 0];
        }
    }
    throw ConfigError("unknown sample region");
}

std::vector<double> xi_zero_field(const GluedMesh& mesh, const Eigen::Vector2d& constants,
                                  double deps2_dt, double delta_rel) {
    std::vector<double> out;
    out.reserve(mesh.samples().size());
    for (const auto& smp : mesh.samples())
        out.push_back(xi_zero(mesh, constants, deps2_dt, smp, delta_rel));
    return out;
}

double project(const GluedMesh& mesh, const std::vector<double>& field,
               const std::vector<double>& weight, const Eigen::Vector2d& field_outer,
               const Eigen::Vector2d& weight_outer) {
    const auto& samples = mesh.samples();
    if (field.size() != samples.size() || weight.size() != samples.size())
        throw ConfigError("field and weight must align with mesh samples");
    std::vector<double> prods(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        prods[i] = field[i] * weight[i] * samples[i].qweight * samples[i].sqrt_det_g;
    return pairwise_sum(prods) +
           field_outer[0] * weight_outer[0] * mesh.outer_volume(1) +
           field_outer[1] * weight_outer[1] * mesh.outer_volume(2);
}

ProjectionReport balancing_projection(GluedMesh& mesh, double deps2_dt,
                                      double theta_h_rel) {
    bool have_metric = true;
    for (const auto& smp : mesh.samples())
        if (smp.sqrt_det_g == 0.0) {
            have_metric = false;
            break;
        }
    if (!have_metric) {
        mesh.compute_metric();
        mesh.compute_theta(theta_h_rel);
    }

    const double c_L = mesh.neck().c_plus();
    const double A = mesh.neck().phases().A;
    const double eps = mesh.profile().eps;
    const double V1 = mesh.V1(), V2 = mesh.V2();
    const int m = mesh.dim();

    const DesingGraph graph = DesingGraph::torus(V1, V2, c_L);
    Eigen::VectorXd rates(1);
    rates[0] = deps2_dt;
    const Eigen::VectorXd C = solve_constants(graph, rates);

    std::vector<double> field(mesh.samples().size());
    const std::vector<double> xi = xi_zero_field(mesh, C.head<2>(), deps2_dt);
    for (std::size_t i = 0; i < field.size(); ++i)
        field[i] = mesh.samples()[i].theta + xi[i];
    const Eigen::Vector2d field_outer(C[0], C[1]);

    const KernelElement w = normalize_kernel(mesh, kernel_element(mesh, {0.0, 1.0}));
    const std::vector<double> ones(mesh.samples().size(), 1.0);

    ProjectionReport rep;
    rep.eps = eps;
    rep.deps2_dt = deps2_dt;
    rep.pi_w = project(mesh, field, w.values, field_outer, w.outer_values);
    rep.pi_1 = project(mesh, field, ones, field_outer, {1.0, 1.0});
    rep.closed_form = c_L * V1 * V2 / (V1 + V2) *
                      (deps2_dt + A / c_L * (V1 + V2) / (V1 * V2) *
                                      std::pow(eps, static_cast<double>(m)));
    rep.residual = rep.pi_w - rep.closed_form;
    rep.kernel_mean = w.mean;
    rep.kernel_norm = w.normL2;
    return rep;
}

}  // namespace slglue
