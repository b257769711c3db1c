#include "slglue/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "slglue/errors.hpp"
#include "slglue/graph.hpp"
#include "slglue/kernel.hpp"
#include "slglue/lattice.hpp"
#include "slglue/lawlor.hpp"
#include "slglue/mesh.hpp"
#include "slglue/norms.hpp"
#include "slglue/schedule.hpp"
#include "slglue/sphere_rule.hpp"
#include "slglue/summation.hpp"

namespace slglue {

namespace {

double to_double(const Json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            std::size_t used = 0;
            const std::string s = v.get<std::string>();
            const double x = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return x;
        } catch (const std::exception&) {
            throw ConfigError("parameter '" + key + "' is not a number");
        }
    }
    throw ConfigError("parameter '" + key + "' is not a number");
}

std::vector<double> split_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        if (item.empty()) throw ConfigError("parameter '" + key + "' has an empty entry");
        out.push_back(to_double(Json(item), key));
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return out;
}

std::string list_text(const Eigen::VectorXd& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_g17(v[i]);
    }
    return out + "]";
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

std::string region_tag(Region region) {
    switch (region) {
        case Region::Tip: return "tip";
        case Region::QMinus: return "q_minus";
        case Region::QPlus: return "q_plus";
        case Region::Outer1: return "outer1";
        case Region::Outer2: return "outer2";
    }
    return "tip";
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + dir);
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

GlueProfile profile_from(const Json& p, int m) {
    GlueProfile profile;
    profile.m = m;
    profile.R1 = param_double(p, "R1", profile.R1);
    profile.R2 = param_double(p, "R2", profile.R2);
    profile.hbar = param_double(p, "hbar", profile.hbar);
    profile.tau = param_double(p, "tau", profile.tau);
    profile.eps = param_double(p, "eps", profile.eps);
    return profile;
}

MeshResolution resolution_from(const Json& p) {
    MeshResolution res;
    res.sphere_level = static_cast<int>(param_int(p, "level", res.sphere_level));
    res.gauss = static_cast<int>(param_int(p, "gauss", res.gauss));
    res.tip_panels = static_cast<int>(param_int(p, "tip_panels", res.tip_panels));
    res.deep_panels = static_cast<int>(param_int(p, "deep_panels", res.deep_panels));
    res.pre_panels = static_cast<int>(param_int(p, "pre_panels", res.pre_panels));
    res.band_panels = static_cast<int>(param_int(p, "band_panels", res.band_panels));
    res.flat_panels = static_cast<int>(param_int(p, "flat_panels", res.flat_panels));
    res.outer_ring = static_cast<int>(param_int(p, "outer_ring", res.outer_ring));
    return res;
}

std::shared_ptr<const Neck> neck_from(const Json& p, int& m_out, std::string& a_text) {
    const long m_param = param_int(p, "m", 3);
    if (m_param < 3) throw ConfigError("parameter 'm' must be at least 3");
    const std::vector<double> a = param_list(
        p, "a", std::vector<double>(static_cast<std::size_t>(m_param), 1.0));
    NeckParams np{to_vector(a)};
    if (m_param != np.dim())
        throw ConfigError("parameter 'm' does not match the length of 'a'");
    m_out = static_cast<int>(np.dim());
    a_text = list_text(np.a);
    return std::make_shared<Neck>(np);
}

struct BandIntegrals {
    double minus = 0.0;
    double plus = 0.0;
    double sup_abs_theta = 0.0;
};

BandIntegrals band_integrals(const GluedMesh& mesh) {
    std::vector<double> terms_minus, terms_plus;
    BandIntegrals out;
    for (const auto& sample : mesh.samples()) {
        if (!sample.band) continue;
        const double v = sample.theta * sample.qweight * sample.sqrt_det_g;
        if (sample.region == Region::QMinus)
            terms_minus.push_back(v);
        else
            terms_plus.push_back(v);
        out.sup_abs_theta = std::max(out.sup_abs_theta, std::abs(sample.theta));
    }
    out.minus = pairwise_sum(terms_minus);
    out.plus = pairwise_sum(terms_plus);
    return out;
}

Json projection_block(const ProjectionReport& rep, const BandIntegrals& band,
                      const std::string& tag) {
    Json j;
    j["eps"] = traced(rep.eps, "closed-form schedule point, " + tag);
    j["dteps2"] = traced(rep.deps2_dt, "closed_form_deps2 at " + tag);
    j["Pi_w"] = traced(rep.pi_w, "project(theta + xi0, normalized kernel), " + tag);
    j["Pi_1"] = traced(rep.pi_1, "project(theta + xi0, 1), " + tag);
    j["closed_form_value"] =
        traced(rep.closed_form, "balancing closed form c_L V1 V2/(V1+V2)[dteps2 + (A/c_L)(1/V1+1/V2) eps^m], " + tag);
    j["residual"] = traced(rep.residual, "Pi_w - closed_form_value, " + tag);
    j["band_integral_minus"] =
        traced(band.minus, "project(theta restricted to minus transition band, 1), " + tag);
    j["band_integral_plus"] =
        traced(band.plus, "project(theta restricted to plus transition band, 1), " + tag);
    j["kernel"] = Json::object();
    j["kernel"]["mean"] = traced(rep.kernel_mean, "normalize_kernel mean, " + tag);
    j["kernel"]["normL2"] = traced(rep.kernel_norm, "normalize_kernel L2 norm, " + tag);
    return j;
}

Json cmd_neck(const RunConfig& cfg) {
    int m = 0;
    std::string a_text;
    const auto neck = neck_from(cfg.parameters, m, a_text);
    const PhaseData& ph = neck->phases();
    const std::string prov = "phases_from_params(a=" + a_text + ")";

    Json rep;
    rep["command"] = "neck";
    rep["m"] = m;
    rep["a"] = Json::array();
    for (Eigen::Index j = 0; j < neck->params().a.size(); ++j)
        rep["a"].push_back(neck->params().a[j]);
    rep["phi"] = Json::array();
    for (Eigen::Index j = 0; j < ph.phi.size(); ++j)
        rep["phi"].push_back(traced(ph.phi[j], prov));
    rep["phi_sum"] = traced(ph.phi.sum(), prov);
    rep["A"] = traced(ph.A, prov);
    rep["c_plus"] = traced(neck->c_plus(), "neck_constant(a=" + a_text + ")");
    rep["gamma"] = traced(2.0 - m, "end decay rate 2 - m");

    const double lambda = 1.7, dil = 0.6;
    NeckParams scaled{neck->params().a * lambda};
    const PhaseData ph_l = phases_from_params(scaled);
    NeckParams dilated{neck->params().a / (dil * dil)};
    const double c_dil = neck_constant_value(dilated);
    Json scaling;
    scaling["phase_invariance"] =
        traced((ph_l.phi - ph.phi).cwiseAbs().maxCoeff(),
               "max |phi(lambda a) - phi(a)|, lambda=" + format_g17(lambda));
    scaling["A_dilation"] =
        traced(std::abs(ph_l.A - std::pow(lambda, -0.5 * m) * ph.A),
               "|A(lambda a) - lambda^{-m/2} A(a)|, lambda=" + format_g17(lambda));
    scaling["c_plus_dilation"] =
        traced(std::abs(c_dil - dil * dil * neck->c_plus()),
               "|c_plus(eps^{-2} a) - eps^2 c_plus(a)|, eps=" + format_g17(dil));
    rep["scaling"] = scaling;

    Eigen::VectorXd sigma = Eigen::VectorXd::Ones(m).normalized();
    std::vector<double> rs, abs_minus, abs_plus, lr, lminus, lplus;
    for (int i = 0; i < 9; ++i) {
        const double r = 10.0 * std::pow(10.0, i / 8.0);
        const double pm = neck->end_potential_closed(End::Minus, sigma, r);
        const double pp = neck->end_potential_closed(End::Plus, sigma, r);
        rs.push_back(r);
        abs_minus.push_back(std::abs(pm));
        abs_plus.push_back(std::abs(pp));
        lr.push_back(std::log(r));
        lminus.push_back(std::log(std::abs(pm)));
        lplus.push_back(std::log(std::abs(pp)));
    }
    Json decay;
    decay["provenance"] =
        "end_potential_closed(a=" + a_text + ", sigma=ones/|ones|, r in [10,100])";
    decay["slope_minus"] = traced(blowup_rate(rs, abs_minus), "log-log fit, minus end");
    decay["slope_plus"] = traced(blowup_rate(rs, abs_plus), "log-log fit, plus end");
    decay["target"] = traced(2.0 - m, "end decay rate 2 - m");
    decay["log_r"] = lr;
    decay["log_abs_minus"] = lminus;
    decay["log_abs_plus"] = lplus;
    rep["end_decay"] = decay;

    write_text(join(cfg.output_dir, "report.json"), dump_g17(rep));
    return rep;
}

Json cmd_glue(const RunConfig& cfg) {
    int m = 0;
    std::string a_text;
    const auto neck = neck_from(cfg.parameters, m, a_text);
    const GlueProfile profile = profile_from(cfg.parameters, m);
    const double scale = param_double(cfg.parameters, "scale", 10.0);
    const TorusLattice lattice = TorusLattice::cubic(m, scale, neck->phases().phi);
    const MeshResolution res = resolution_from(cfg.parameters);
    const bool with_norm_a = param_int(cfg.parameters, "norm_a", 0) != 0;

    GluedMesh mesh(profile, neck, lattice, res);
    mesh.compute_metric();
    mesh.compute_theta();
    if (with_norm_a) mesh.compute_norm_a();

    const std::string geom = "a=" + a_text + ", eps=" + format_g17(profile.eps);

    // one line per sample
    std::string jsonl;
    for (const auto& s : mesh.samples()) {
        std::string line = "{\"tag\":\"" + region_tag(s.region) + "\",\"coords\":[";
        if (s.region == Region::Tip) {
            line += format_g17(s.s);
            for (Eigen::Index i = 0; i < s.x.size(); ++i) line += "," + format_g17(s.x[i]);
        } else {
            for (Eigen::Index i = 0; i < s.x.size(); ++i) {
                if (i) line += ",";
                line += format_g17(s.x[i]);
            }
            line += "," + format_g17(s.frak_r);
        }
        line += "],\"point\":[";
        for (Eigen::Index i = 0; i < s.ambient.size(); ++i) {
            if (i) line += ",";
            line += format_g17(s.ambient[i]);
        }
        line += "],\"metric\":[";
        for (Eigen::Index r = 0; r < s.metric.rows(); ++r)
            for (Eigen::Index c = 0; c < s.metric.cols(); ++c) {
                if (r || c) line += ",";
                line += format_g17(s.metric(r, c));
            }
        line += "],\"theta\":" + format_g17(s.theta) + ",\"normA\":" + format_g17(s.normA) +
                ",\"rho\":" + format_g17(s.rho) + "}\n";
        jsonl += line;
    }
    write_text(join(cfg.output_dir, "mesh.jsonl"), jsonl);

    struct Row {
        long samples = 0;
        long band_samples = 0;
        std::vector<double> volume_terms;
        double volume = 0.0;
        double sup_theta = 0.0;
        double sup_norm_a = 0.0;
    };
    std::map<std::string, Row> rows;
    for (const auto& s : mesh.samples()) {
        Row& row = rows[region_tag(s.region)];
        ++row.samples;
        if (s.band) ++row.band_samples;
        row.volume_terms.push_back(s.qweight * s.sqrt_det_g);
        row.sup_theta = std::max(row.sup_theta, std::abs(s.theta));
        row.sup_norm_a = std::max(row.sup_norm_a, s.normA);
    }
    rows["outer1"].volume = mesh.outer_volume(1);
    rows["outer2"].volume = mesh.outer_volume(2);
    std::string csv = "region,samples,band_samples,volume,sup_abs_theta,sup_norm_a\n";
    double total_volume = 0.0;
    long total_samples = 0;
    for (const std::string tag : {"tip", "q_minus", "q_plus", "outer1", "outer2"}) {
        Row& row = rows[tag];
        row.volume += pairwise_sum(row.volume_terms);
        total_volume += row.volume;
        total_samples += row.samples;
        csv += tag + "," + std::to_string(row.samples) + "," +
               std::to_string(row.band_samples) + "," + format_g17(row.volume) + "," +
               format_g17(row.sup_theta) + "," + format_g17(row.sup_norm_a) + "\n";
    }
    csv += "total," + std::to_string(total_samples) + ",," + format_g17(total_volume) +
           ",,\n";
    write_text(join(cfg.output_dir, "summary.csv"), csv);

    double sup_band = 0.0, sup_outside = 0.0;
    for (const auto& s : mesh.samples()) {
        if (s.band)
            sup_band = std::max(sup_band, std::abs(s.theta));
        else
            sup_outside = std::max(sup_outside, std::abs(s.theta));
    }

    Json rep;
    rep["command"] = "glue";
    rep["m"] = m;
    rep["eps"] = param_double(cfg.parameters, "eps", 0.05);
    rep["samples"] = static_cast<long long>(mesh.samples().size());
    rep["expected_samples"] = static_cast<long long>(res.expected_samples(
        static_cast<int>(sphere_rule(m, res.sphere_level).weights.size())));
    Json volumes;
    volumes["V1"] = traced(mesh.V1(), "lattice torus volume, component 1");
    volumes["V2"] = traced(mesh.V2(), "lattice torus volume, component 2");
    volumes["measured_total"] =
        traced(total_volume, "quadrature volume plus exact outer volumes, " + geom);
    volumes["target_total"] = traced(mesh.V1() + mesh.V2(), "V1 + V2");
    rep["volumes"] = volumes;
    Json angle;
    angle["sup_abs_theta_band"] = traced(sup_band, "compute_theta over the band, " + geom);
    angle["sup_abs_theta_outside"] =
        traced(sup_outside, "compute_theta outside the band, " + geom);
    rep["angle"] = angle;
    write_text(join(cfg.output_dir, "report.json"), dump_g17(rep));
    return rep;
}

Json cmd_graph(const RunConfig& cfg) {
    DesingGraph g;
    if (cfg.parameters.contains("file")) {
        const Json gfile = read_json(param_string(cfg.parameters, "file", ""));
        if (!gfile.contains("vertices") || !gfile.contains("edges"))
            throw ConfigError("graph file needs 'vertices' and 'edges'");
        for (const auto& v : gfile["vertices"])
            g.vertices.push_back({static_cast<int>(g.vertices.size()),
                                  to_double(v.at("volume"), "volume")});
        for (const auto& e : gfile["edges"]) {
            GraphEdge edge;
            edge.id = static_cast<int>(g.edges.size());
            edge.tail = static_cast<int>(to_double(e.at("tail"), "tail"));
            edge.head = static_cast<int>(to_double(e.at("head"), "head"));
            edge.c = to_double(e.at("c"), "c");
            g.edges.push_back(edge);
        }
    } else {
        g = DesingGraph::torus(param_double(cfg.parameters, "v1", 1.0),
                               param_double(cfg.parameters, "v2", 1.0),
                               param_double(cfg.parameters, "c", 1.0));
    }
    g.validate();

    Eigen::VectorXd rates(g.n_edges());
    rates.setConstant(param_double(cfg.parameters, "rate", -1.0));
    const Eigen::VectorXd C = solve_constants(g, rates);
    const Eigen::MatrixXd B = incidence(g);
    Eigen::VectorXd target(g.n_edges());
    for (int j = 0; j < g.n_edges(); ++j) target[j] = g.edges[j].c * rates[j];
    const double residual = (B.transpose() * C - target).cwiseAbs().maxCoeff();
    double vmean = 0.0;
    for (int b = 0; b < g.n_vertices(); ++b) vmean += g.vertices[b].volume * C[b];
    const GramReport gr = gram(g);

    Json rep;
    rep["command"] = "graph";
    rep["vertices"] = Json::array();
    for (const auto& v : g.vertices) {
        Json jv;
        jv["id"] = v.id;
        jv["volume"] = v.volume;
        rep["vertices"].push_back(jv);
    }
    rep["edges"] = Json::array();
    for (const auto& e : g.edges) {
        Json je;
        je["id"] = e.id;
        je["tail"] = e.tail;
        je["head"] = e.head;
        je["c"] = e.c;
        rep["edges"].push_back(je);
    }
    rep["rate"] = rates[0];
    rep["constants"] = Json::array();
    for (int b = 0; b < g.n_vertices(); ++b)
        rep["constants"].push_back(
            traced(C[b], "solve_constants(vertex " + std::to_string(b) + ")"));
    rep["matching_residual"] =
        traced(residual, "max |B^T C - c rate| over edges");
    rep["volume_weighted_mean"] = traced(vmean, "sum V_b C_b");
    Json jg;
    jg["min_eigenvalue"] = traced(gr.min_eigenvalue, "gram(B^T V^{-1} B)");
    jg["max_eigenvalue"] = traced(gr.max_eigenvalue, "gram(B^T V^{-1} B)");
    rep["gram"] = jg;
    rep["tree"] = is_tree(g);
    write_text(join(cfg.output_dir, "report.json"), dump_g17(rep));
    return rep;
}

Json cmd_ode(const RunConfig& cfg) {
    NeckSchedule s;
    s.m = static_cast<int>(param_int(cfg.parameters, "m", 3));
    s.Lambda = param_double(cfg.parameters, "Lambda", 1.0);
    s.c = param_double(cfg.parameters, "c", 1.0);
    s.eps0 = param_double(cfg.parameters, "eps0", matched_eps0(s.m, s.c, s.Lambda));
    const double t1 = param_double(cfg.parameters, "t1", 100.0 * s.Lambda);
    const double tol = param_double(cfg.parameters, "tol", 1e-12);
    const double alpha = param_double(cfg.parameters, "alpha", 0.01);
    const long rows = param_int(cfg.parameters, "rows", 33);
    if (rows < 2) throw ConfigError("'rows' must be at least 2");

    const OdePath path = solve_balancing_ode(s, s.Lambda, t1, tol);
    std::string csv = "t,eps_closed,eps_numeric,abs_diff\n";
    double max_rel = 0.0;
    std::vector<double> ts, eps_values;
    for (long i = 0; i < rows; ++i) {
        const double t =
            s.Lambda * std::pow(t1 / s.Lambda, static_cast<double>(i) / (rows - 1));
        const double ec = closed_form(s, t);
        const double en = std::sqrt(path.eval(t)[0]);
        max_rel = std::max(max_rel, std::abs(en - ec) / ec);
        ts.push_back(t);
        eps_values.push_back(integrate_schedule(s, t));
        csv += csv_row({t, ec, en, std::abs(en - ec)});
    }
    write_text(join(cfg.output_dir, "summary.csv"), csv);

    const AssumptionReport ar = validate_assumption(
        [&](double t) { return closed_form(s, t); },
        [&](double t) { return closed_form_derivative(s, t); }, s.m, s.Lambda, t1, alpha);

    Json rep;
    rep["command"] = "ode";
    rep["m"] = s.m;
    rep["Lambda"] = s.Lambda;
    rep["c"] = s.c;
    rep["eps0"] = s.eps0;
    rep["t1"] = t1;
    rep["max_rel_err"] =
        traced(max_rel, "closed_form vs solve_balancing_ode on " + std::to_string(rows) +
                            " log-spaced times");
    rep["ode_error_estimate"] = traced(path.error_estimate, "embedded RK45 estimate");
    auto bound = [](const AssumptionBound& b, const std::string& what) {
        Json j;
        j["at_start"] = traced(b.at_start, what + " at Lambda");
        j["sup"] = traced(b.sup, what + " sup over [Lambda, t1]");
        return j;
    };
    Json assumption;
    assumption["upper"] = bound(ar.upper, "eps t^{1/(m-2)}");
    assumption["lower"] = bound(ar.lower, "t^{-1/(m-2)} / eps");
    assumption["deriv"] = bound(ar.deriv, "|eps'| t^{(m-1)/(m-2)}");
    assumption["holder"] = bound(ar.holder, "Holder quotient of eps' against t^{(1-m+2 alpha)/(m-2)}");
    assumption["finite"] = ar.finite;
    rep["assumption"] = assumption;

    std::vector<double> lt, le;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        lt.push_back(std::log(ts[i]));
        le.push_back(std::log(eps_values[i]));
    }
    Json sweep;
    sweep["provenance"] = "bracket-form schedule, log-log columns";
    sweep["log_t"] = lt;
    sweep["log_eps"] = le;
    rep["schedule_sweep"] = sweep;
    rep["schedule_slope"] = traced(
        blowup_rate(ts, eps_values),
        "log-log slope of the bracket-form eps(t), target -1/(m-2)");
    write_text(join(cfg.output_dir, "report.json"), dump_g17(rep));
    return rep;
}

Json cmd_project(const RunConfig& cfg) {
    int m = 0;
    std::string a_text;
    const auto neck = neck_from(cfg.parameters, m, a_text);
    GlueProfile profile = profile_from(cfg.parameters, m);
    const double scale = param_double(cfg.parameters, "scale", 10.0);
    const TorusLattice lattice = TorusLattice::cubic(m, scale, neck->phases().phi);
    const MeshResolution res = resolution_from(cfg.parameters);
    const bool freeze = param_int(cfg.parameters, "freeze", 0) != 0;
    const double theta_h = param_double(cfg.parameters, "theta_h", 5e-3);

    const double A = neck->phases().A;
    const double c_L = neck->c_plus();
    const double coeff =
        NeckSchedule::coefficient(A, c_L, lattice.V1(), lattice.V2());

    const double eps_top = param_double(cfg.parameters, "eps", 0.05);
    std::vector<ProjectionReport> reports;
    std::vector<BandIntegrals> bands;
    for (const double eps : {eps_top, 0.5 * eps_top}) {
        profile.eps = eps;
        GluedMesh mesh(profile, neck, lattice, res);
        const double deps2 = freeze ? 0.0 : -coeff * std::pow(eps, m);
        reports.push_back(balancing_projection(mesh, deps2, theta_h));
        bands.push_back(band_integrals(mesh));
    }
    const double ratio =
        std::abs(reports[1].residual) / std::max(std::abs(reports[0].residual), 1e-300);

    Json rep = projection_block(reports[0], bands[0], "eps=" + format_g17(eps_top));
    rep["command"] = "project";
    rep["frozen"] = freeze;
    rep["band_target_abs"] =
        traced(std::pow(eps_top, m) * A, "eps^m A at eps=" + format_g17(eps_top));
    rep["residual_ratio"] =
        traced(ratio, "|residual(eps/2)| / |residual(eps)|, target 2^{-(1+tau)m}");
    rep["halved"] = projection_block(reports[1], bands[1],
                                     "eps=" + format_g17(0.5 * eps_top));

    std::vector<double> le, lth, lres;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        le.push_back(std::log(reports[i].eps));
        lth.push_back(std::log(std::max(bands[i].sup_abs_theta, 1e-300)));
        lres.push_back(std::log(std::max(std::abs(reports[i].residual), 1e-300)));
    }
    Json sweep;
    sweep["provenance"] =
        "meshes at eps and eps/2, " + std::string("a=") + a_text + "; log-log columns";
    sweep["log_eps"] = le;
    sweep["log_sup_band_theta"] = lth;
    sweep["log_abs_residual"] = lres;
    rep["sweep"] = sweep;
    write_text(join(cfg.output_dir, "report.json"), dump_g17(rep));
    return rep;
}

Json cmd_norms(const RunConfig& cfg) {
    const int m = static_cast<int>(param_int(cfg.parameters, "m", 3));
    NormParams p = example_constants(m);
    p.mu = param_double(cfg.parameters, "mu", p.mu);
    p.nu = param_double(cfg.parameters, "nu", p.nu);
    p.alpha = param_double(cfg.parameters, "alpha", p.alpha);
    p.tau = param_double(cfg.parameters, "tau", p.tau);
    p.zeta = param_double(cfg.parameters, "zeta", p.zeta);
    p.Lambda = param_double(cfg.parameters, "Lambda", p.Lambda);
    const ConstantsReport cr = check_constants(p, m);

    Json rep;
    rep["command"] = "norms";
    rep["m"] = m;
    Json params;
    params["mu"] = p.mu;
    params["nu"] = p.nu;
    params["alpha"] = p.alpha;
    params["tau"] = p.tau;
    params["zeta"] = p.zeta;
    params["Lambda"] = p.Lambda;
    rep["params"] = params;
    Json constants;
    constants["provenance"] = "check_constants(m=" + std::to_string(m) + ")";
    constants["ok"] = cr.ok;
    constants["first_violation"] = cr.first_violation;
    constants["checks"] = Json::array();
    for (const auto& c : cr.checks) {
        Json jc;
        jc["name"] = c.name;
        jc["ok"] = c.ok;
        jc["value"] = c.value;
        jc["lower"] = c.lower;
        jc["upper"] = c.upper;
        constants["checks"].push_back(jc);
    }
    rep["constants"] = constants;

    if (param_int(cfg.parameters, "with_field", 1) != 0) {
        int mm = 0;
        std::string a_text;
        const auto neck = neck_from(cfg.parameters, mm, a_text);
        GlueProfile profile = profile_from(cfg.parameters, m);
        profile.tau = p.tau;
        const double scale = param_double(cfg.parameters, "scale", 10.0);
        const TorusLattice lattice = TorusLattice::cubic(m, scale, neck->phases().phi);
        MeshResolution res = resolution_from(cfg.parameters);
        if (!cfg.parameters.contains("level")) res.sphere_level = 3;
        const double eps_ref = param_double(cfg.parameters, "eps", 0.05);
        const long budget = param_int(cfg.parameters, "budget", 2000);

        // power-law slices eps(t) = eps_ref (t/Lambda)^{-1/(m-2)}
        std::vector<NormSlice> slices;
        std::vector<GluedMesh> meshes;
        for (const double factor : {1.0, 1.5, 2.0}) {
            const double t = factor * p.Lambda;
            profile.eps = eps_ref * std::pow(factor, -1.0 / (m - 2.0));
            meshes.emplace_back(profile, neck, lattice, res);
            meshes.back().compute_metric();
            meshes.back().compute_theta();
            slices.push_back(theta_slice(meshes.back(), t));
        }
        const double sup_all = weighted_sup(slices, p.mu, p.nu + 2.0);
        const double sup_first = weighted_sup({slices.data(), 1}, p.mu, p.nu + 2.0);
        const double sup_last = weighted_sup({slices.data() + 2, 1}, p.mu, p.nu + 2.0);
        const double target =
            p.mu - (p.tau * (p.nu + 2.0) + (1.0 - p.tau) * m) / (m - 2.0);
        const HolderReport hr =
            holder_seminorms(slices, p, m, static_cast<int>(budget), cfg.seed);

        Json field;
        field["provenance"] = "theta slices on the closed-form schedule, a=" + a_text +
                              ", eps(Lambda)=" + format_g17(eps_ref);
        field["sup"] = traced(sup_all, "weighted_sup(theta, mu, nu+2)");
        field["sup_exponent"] = traced(std::log2(sup_last / sup_first),
                                       "log2 of the Lambda vs 2 Lambda weighted sup ratio");
        field["sup_exponent_target"] =
            traced(target, "mu - (tau (nu+2) + (1-tau) m)/(m-2)");
        field["spatial_seminorm"] = traced(hr.spatial, "holder_seminorms spatial part");
        field["temporal_seminorm"] = traced(hr.temporal, "holder_seminorms temporal part");
        field["budget"] = hr.budget;
        field["seed"] = hr.seed;
        rep["field"] = field;
    }
    write_text(join(cfg.output_dir, "report.json"), dump_g17(rep));
    return rep;
}

Json cmd_report(const RunConfig& cfg) {
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(cfg.output_dir)) {
        if (!entry.is_directory()) continue;
        if (std::filesystem::exists(entry.path() / "report.json"))
            names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    if (names.empty())
        throw ConfigError("no run reports found under: " + cfg.output_dir);

    Json rep;
    rep["command"] = "report";
    rep["runs"] = Json::object();
    bool wrote_decay = false, wrote_schedule = false, wrote_angle = false,
         wrote_residual = false;
    for (const auto& name : names) {
        const Json run = read_json(join(join(cfg.output_dir, name), "report.json"));
        rep["runs"][name] = run;

        if (!wrote_decay && run.contains("end_decay")) {
            const Json& d = run["end_decay"];
            std::string csv = "log_r,log_abs_minus,log_abs_plus\n";
            for (std::size_t i = 0; i < d["log_r"].size(); ++i)
                csv += csv_row({d["log_r"][i].get<double>(),
                                d["log_abs_minus"][i].get<double>(),
                                d["log_abs_plus"][i].get<double>()});
            write_text(join(cfg.output_dir, "plotdata_end_decay.csv"), csv);
            wrote_decay = true;
        }
        if (!wrote_schedule && run.contains("schedule_sweep")) {
            const Json& d = run["schedule_sweep"];
            std::string csv = "log_t,log_eps\n";
            for (std::size_t i = 0; i < d["log_t"].size(); ++i)
                csv += csv_row({d["log_t"][i].get<double>(), d["log_eps"][i].get<double>()});
            write_text(join(cfg.output_dir, "plotdata_schedule.csv"), csv);
            wrote_schedule = true;
        }
        if (run.contains("sweep") && run["sweep"].contains("log_eps")) {
            const Json& d = run["sweep"];
            if (!wrote_angle && d.contains("log_sup_band_theta")) {
                std::string csv = "log_eps,log_sup_band_theta\n";
                for (std::size_t i = 0; i < d["log_eps"].size(); ++i)
                    csv += csv_row({d["log_eps"][i].get<double>(),
                                    d["log_sup_band_theta"][i].get<double>()});
                write_text(join(cfg.output_dir, "plotdata_angle_scaling.csv"), csv);
                wrote_angle = true;
            }
            if (!wrote_residual && d.contains("log_abs_residual")) {
                std::string csv = "log_eps,log_abs_residual\n";
                for (std::size_t i = 0; i < d["log_eps"].size(); ++i)
                    csv += csv_row({d["log_eps"][i].get<double>(),
                                    d["log_abs_residual"][i].get<double>()});
                write_text(join(cfg.output_dir, "plotdata_residual.csv"), csv);
                wrote_residual = true;
            }
        }
    }
    write_text(join(cfg.output_dir, "report.json"), dump_g17(rep));
    return rep;
}

}  // namespace

double param_double(const Json& params, const std::string& key, double fallback) {
    if (!params.contains(key)) return fallback;
    return to_double(params.at(key), key);
}

long param_int(const Json& params, const std::string& key, long fallback) {
    if (!params.contains(key)) return fallback;
    const double v = to_double(params.at(key), key);
    const long n = static_cast<long>(std::llround(v));
    if (std::abs(v - n) > 1e-12)
        throw ConfigError("parameter '" + key + "' is not an integer");
    return n;
}

std::string param_string(const Json& params, const std::string& key,
                         const std::string& fallback) {
    if (!params.contains(key)) return fallback;
    const Json& v = params.at(key);
    if (v.is_string()) return v.get<std::string>();
    throw ConfigError("parameter '" + key + "' is not a string");
}

std::vector<double> param_list(const Json& params, const std::string& key,
                               const std::vector<double>& fallback) {
    if (!params.contains(key)) return fallback;
    const Json& v = params.at(key);
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& item : v) out.push_back(to_double(item, key));
        return out;
    }
    if (v.is_string()) return split_list(v.get<std::string>(), key);
    throw ConfigError("parameter '" + key + "' is not a list");
}

Json run(const RunConfig& config) {
    ensure_dir(config.output_dir);
    if (config.command == "neck") return cmd_neck(config);
    if (config.command == "glue") return cmd_glue(config);
    if (config.command == "graph") return cmd_graph(config);
    if (config.command == "ode") return cmd_ode(config);
    if (config.command == "project") return cmd_project(config);
    if (config.command == "norms") return cmd_norms(config);
    if (config.command == "report") return cmd_report(config);
    throw ConfigError("unknown command: " + config.command);
}

namespace {

struct SubState {
    CLI::App* sub = nullptr;
    std::string config;
    std::string out = ".";
    std::string seed = "12345";
    std::map<std::string, std::string> values;
};

void add_keys(SubState& state, std::initializer_list<const char*> keys) {
    state.sub->add_option("--config", state.config, "flat JSON config file");
    state.sub->add_option("--out", state.out, "output directory");
    state.sub->add_option("--seed", state.seed, "seed for randomized estimates");
    for (const char* key : keys)
        state.sub->add_option(std::string("--") + key, state.values[key]);
}

int error_json(const std::string& type, const std::string& message, int code) {
    Json err;
    err["error"] = Json::object();
    err["error"]["type"] = type;
    err["error"]["message"] = message;
    err["error"]["exit_code"] = code;
    std::fputs(dump_g17(err).c_str(), stdout);
    return code;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"desingularized special Lagrangian toolkit"};
    app.require_subcommand(1);
    std::map<std::string, SubState> subs;
    auto make = [&](const std::string& name, const std::string& desc,
                    std::initializer_list<const char*> keys) {
        SubState& state = subs[name];
        state.sub = app.add_subcommand(name, desc);
        add_keys(state, keys);
    };
    make("neck", "asymptotic data and scaling checks of one neck",
         {"a", "m"});
    make("glue", "build a glued mesh; emits summary.csv and mesh.jsonl",
         {"a", "m", "eps", "R1", "R2", "hbar", "tau", "scale", "level", "gauss",
          "tip_panels", "deep_panels", "pre_panels", "band_panels", "flat_panels",
          "outer_ring", "norm_a"});
    make("graph", "solve the component-matching constants",
         {"file", "v1", "v2", "c", "rate"});
    make("ode", "neck-size schedule: numeric vs closed form, growth checks",
         {"m", "Lambda", "c", "eps0", "t1", "tol", "alpha", "rows"});
    make("project", "balancing projection at eps and eps/2",
         {"a", "m", "eps", "R1", "R2", "hbar", "tau", "scale", "level", "gauss",
          "freeze", "theta_h"});
    make("norms", "admissible-constants check and weighted-norm report",
         {"m", "mu", "nu", "alpha", "tau", "zeta", "Lambda", "a", "eps", "scale",
          "level", "budget", "with_field", "R1", "R2", "hbar"});
    make("report", "aggregate run reports and emit plot data", {});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return error_json("config", e.what(), 2);
    }

    RunConfig cfg;
    try {
        for (auto& [name, state] : subs) {
            if (!state.sub->parsed()) continue;
            cfg.command = name;
            cfg.output_dir = state.out;
            if (!state.config.empty()) {
                const Json file = read_json(state.config);
                if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
                cfg.parameters = file;
            }
            for (auto& [key, value] : state.values)
                if (state.sub->count("--" + key) > 0) cfg.parameters[key] = value;
            if (state.sub->count("--seed") > 0 || !cfg.parameters.contains("seed"))
                cfg.parameters["seed"] = state.seed;
            cfg.seed = static_cast<std::uint64_t>(param_int(cfg.parameters, "seed", 12345));
        }
        run(cfg);
        return 0;
    } catch (const ConfigError& e) {
        return error_json("config", e.what(), 2);
    } catch (const NumericError& e) {
        return error_json("numeric", e.what(), 3);
    } catch (const GeometryError& e) {
        return error_json("geometric", e.what(), 4);
    } catch (const std::exception& e) {
        return error_json("internal", e.what(), 3);
    }
}

}  // namespace slglue
