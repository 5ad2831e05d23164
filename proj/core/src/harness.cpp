#include "dnlslab/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "dnlslab/fourier.hpp"
#include "dnlslab/norms.hpp"
#include "dnlslab/picard.hpp"
#include "dnlslab/propagators.hpp"
#include "dnlslab/scattering.hpp"
#include "dnlslab/solver.hpp"

namespace dnlslab {

namespace {

using nlohmann::json;

const char* kExperiments[] = {"simulate",      "scatter-rate", "sdge-check",
                              "modspace-demo", "mdfm-check",   "elemlem-check"};

json base_defaults() {
    return json{
        {"mode", "M11"},
        {"model",
         {{"dim", 1}, {"power", 3.0}, {"damping", 1.0}, {"sign", 1}, {"margin", 0.01}}},
        {"grid", {{"points", 4096}, {"length", 256.0}}},
        {"time", {{"T", 16.0}, {"dt", 0.001}, {"monitor_cadence", 0.1}}},
        {"initial_data",
         {{"type", "gaussian"}, {"amplitude", 0.1}, {"width", 1.0}, {"center", 0.0}}},
        {"fit_window", {5.0, 8.0}},
        {"seed", 20260823},
        {"m11", {{"window_sigma", 1.0}, {"x_step", 2.0}}},
        {"extraction", {{"tol", 1e-6}, {"trusted_fraction", 0.5}}},
    };
}

json experiment_defaults(const std::string& experiment) {
    if (experiment == "sdge-check")
        return json{{"picard",
                     {{"iterations", 6},
                      {"T", 8.0},
                      {"dt", 0.01},
                      {"eval_stride", 20},
                      {"norm", "M11"},
                      {"x_step", 4.0},
                      {"amplitude_ratio", 0.5}}}};
    if (experiment == "modspace-demo")
        return json{{"grid", {{"points", 16384}, {"length", 100.53096491487338}}},
                    {"counterexample", {{"terms", {16, 32, 64, 128}}, {"bump_radius", 0.25}}}};
    if (experiment == "mdfm-check")
        return json{{"grid", {{"points", 4096}, {"length", 128.0}}},
                    {"initial_data",
                     {{"type", "band_limited_bump"}, {"amplitude", 1.0}, {"radius", 8.0}}},
                    {"mdfm", {{"times", {0.5, 1.0, 2.0}}}},
                    {"dispersive",
                     {{"points", 4096},
                      {"length", 512.0},
                      {"band", 1.0},
                      {"sigma", 4.0},
                      {"modes", 3},
                      {"shift", 8.0},
                      {"family_size", 8},
                      {"times", {1.0, 2.0, 5.0, 10.0, 50.0}}}}};
    if (experiment == "elemlem-check")
        return json{{"elemlem",
                     {{"cases", {{-1.0, 2.0}, {0.0, 1.0}, {3.0, 1.0}}}, {"t_points", 41}}}};
    return json::object();
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

void apply_override(json& doc, const std::string& kv) {
    auto eq = kv.find('=');
    require(eq != std::string::npos && eq > 0, "override must look like key=value: " + kv);
    std::string key = kv.substr(0, eq);
    std::string val = kv.substr(eq + 1);
    for (auto& c : key)
        if (c == '.') c = '/';
    json parsed;
    try {
        parsed = json::parse(val);
    } catch (const json::parse_error&) {
        parsed = val;  // bare string
    }
    try {
        doc[json::json_pointer("/" + key)] = parsed;
    } catch (const json::exception& e) {
        throw ConfigError("bad override path '" + kv + "': " + e.what());
    }
}

ModelParams parse_model(const json& cfg) {
    const json& m = cfg.at("model");
    ModelParams p;
    p.dim = m.at("dim").get<int>();
    p.power = m.at("power").get<double>();
    p.damping = m.at("damping").get<double>();
    p.sign = m.at("sign").get<int>();
    p.margin = m.at("margin").get<double>();
    return p;
}

Mode parse_mode(const json& cfg) {
    std::string s = cfg.at("mode").get<std::string>();
    if (s == "M11") return Mode::M11;
    if (s == "Sigma") return Mode::Sigma;
    throw ConfigError("mode must be M11 or Sigma, got '" + s + "'");
}

Grid parse_grid(const json& cfg, int dim) {
    const json& g = cfg.at("grid");
    try {
        return make_grid(dim, g.at("points").get<int>(), g.at("length").get<double>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Field build_initial(const json& init, const Grid& g) {
    std::string type = init.at("type").get<std::string>();
    if (type == "zero") return zero_field(g, Space::physical);
    if (type == "gaussian" || type == "modulated_gaussian") {
        double amp = init.at("amplitude").get<double>();
        double width = init.at("width").get<double>();
        double center = init.value("center", 0.0);
        double depth = init.value("mod_depth", 0.0);
        double freq = init.value("mod_freq", 2.0);
        if (type == "modulated_gaussian") depth = init.value("mod_depth", 0.3);
        Field f = zero_field(g, Space::physical);
        std::array<int, 3> idx{};
        for (std::size_t i = 0; i < f.samples.size(); ++i) {
            decode_index(g, i, idx);
            double r2 = 0, x1 = 0;
            for (int d = 0; d < g.dim; ++d) {
                double x = g.x(idx[static_cast<std::size_t>(d)]) - center;
                if (d == 0) x1 = x;
                r2 += x * x;
            }
            f.samples[i] = amp * std::exp(-r2 / (width * width)) *
                           (1.0 + depth * std::cos(freq * x1));
        }
        return f;
    }
    if (type == "band_limited_bump") {
        double amp = init.at("amplitude").get<double>();
        double radius = init.at("radius").get<double>();
        Field f = window_field(WindowSpec::bump(radius), g);
        for (auto& z : f.samples) z *= amp;
        return f;
    }
    if (type == "file") {
        std::string path = init.at("path").get<std::string>();
        std::ifstream in(path);
        require(in.good(), "initial_data file not readable: " + path);
        Field f = zero_field(g, Space::physical);
        for (std::size_t i = 0; i < f.samples.size(); ++i) {
            double re, im;
            require(static_cast<bool>(in >> re >> im),
                    "initial_data file too short: " + path);
            f.samples[i] = complex(re, im);
        }
        return f;
    }
    throw ConfigError("unknown initial_data type '" + type + "'");
}

WindowSpec m11_window(const json& cfg) {
    return WindowSpec::gaussian(cfg.at("m11").at("window_sigma").get<double>());
}

TFLattice m11_lattice(const json& cfg) {
    return TFLattice{cfg.at("m11").at("x_step").get<double>(), 0.0, -1, -1};
}

json crit(bool pass, const json& detail) {
    json c = detail;
    c["pass"] = pass;
    return c;
}

double u01(std::mt19937_64& rng) {
    return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

complex gauss(std::mt19937_64& rng) {
    double u1 = std::max(u01(rng), 1e-300);
    double u2 = u01(rng);
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

void check_time_block(const json& cfg) {
    const json& t = cfg.at("time");
    double T = t.at("T").get<double>(), dt = t.at("dt").get<double>(),
           cad = t.at("monitor_cadence").get<double>();
    require(T > 0 && dt > 0 && cad > 0, "time: T, dt, monitor_cadence must be positive");
    long cs = std::lround(cad / dt);
    require(cs >= 1 && std::fabs(cs * dt - cad) <= 1e-9 * cad,
            "time: dt must divide monitor_cadence");
    long ts = std::lround(T / dt);
    require(ts % std::max(cs, 1L) == 0 && std::fabs(ts * dt - T) <= 1e-9 * T,
            "time: monitor_cadence must divide T");
}

SimOptions sim_options(const json& cfg, bool increments, bool track_m11) {
    SimOptions opt;
    opt.T = cfg.at("time").at("T").get<double>();
    opt.dt = cfg.at("time").at("dt").get<double>();
    opt.monitor_cadence = cfg.at("time").at("monitor_cadence").get<double>();
    opt.track_increments = increments;
    opt.track_m11 = track_m11;
    opt.m11_window = m11_window(cfg);
    opt.m11_lattice = m11_lattice(cfg);
    return opt;
}

double series_drift(const std::vector<double>& s) {
    if (s.empty() || s.front() == 0) return 0.0;
    double worst = 0;
    for (double v : s) worst = std::max(worst, std::fabs(v - s.front()));
    return worst / s.front();
}

// sup growth of the ratio series over the second half of [t_lo, t_hi].
double window_growth(const std::vector<double>& t, const std::vector<double>& r,
                     double t_lo, double t_hi) {
    double mid = 0.5 * (t_lo + t_hi), s1 = 0, s2 = 0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (t[j] < t_lo || t[j] > t_hi) continue;
        if (t[j] <= mid) s1 = std::max(s1, r[j]);
        else s2 = std::max(s2, r[j]);
    }
    return s1 > 0 ? std::max(0.0, s2 / s1 - 1.0) : 0.0;
}

RunArtifact run_simulate(const json& cfg) {
    ModelParams model = parse_model(cfg);
    Mode mode = parse_mode(cfg);
    Grid g = parse_grid(cfg, model.dim);
    Field u0 = build_initial(cfg.at("initial_data"), g);
    SimOptions opt = sim_options(cfg, false, mode == Mode::M11);
    opt.keep_states = false;
    Trajectory traj = simulate(u0, model, opt);

    RunArtifact art;
    art.series_columns = {"t", "v_L2", "v_Linf", "v_Hs", "sigma_pullback"};
    bool has_m11 = traj.monitors.count("u_M11") > 0;
    if (has_m11) art.series_columns.push_back("u_M11");
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        std::vector<double> row = {traj.times[j], traj.monitors.at("v_L2")[j],
                                   traj.monitors.at("v_Linf")[j], traj.monitors.at("v_Hs")[j],
                                   traj.monitors.at("sigma_pullback")[j]};
        if (has_m11) row.push_back(traj.monitors.at("u_M11")[j]);
        art.series_rows.push_back(std::move(row));
    }

    double drift = series_drift(traj.monitors.at("v_L2"));
    json results = {{"initial_L2", traj.monitors.at("v_L2").front()},
                    {"final_L2", traj.monitors.at("v_L2").back()},
                    {"l2_drift", drift},
                    {"aborted_at", traj.aborted_at}};
    if (traj.aborted_at < 0 && norm(u0, NormSpec::L2()) > 0) {
        DecayReport rep = decay_check(traj, mode);
        results["decay_sup"] = rep.sup;
        results["decay_second_half_growth"] = rep.second_half_growth;
    }
    art.summary["results"] = results;
    art.summary["criteria"] = {
        {"l2_conserved", crit(drift <= 1e-10, {{"value", drift}, {"threshold", 1e-10}})},
        {"completed", crit(traj.aborted_at < 0, {{"aborted_at", traj.aborted_at}})}};
    return art;
}

RunArtifact run_scatter_rate(const json& cfg) {
    ModelParams model = parse_model(cfg);
    Mode mode = parse_mode(cfg);
    Grid g = parse_grid(cfg, model.dim);
    Field u0 = build_initial(cfg.at("initial_data"), g);
    SimOptions opt = sim_options(cfg, true, true);
    Trajectory traj = simulate(u0, model, opt);
    require(traj.aborted_at < 0, "scatter-rate: trajectory aborted (blow-up)");

    ExtractOptions ex;
    ex.tol = cfg.at("extraction").at("tol").get<double>();
    ex.window = m11_window(cfg);
    ex.lattice = m11_lattice(cfg);
    const double trusted = cfg.at("extraction").at("trusted_fraction").get<double>();
    ScatteringState phi = extract_phi(traj, mode, ex);

    ErrorCurve e2 = error_curve(traj, phi, NormSpec::L2(), trusted);
    ErrorCurve h1 = error_curve(traj, phi, NormSpec::Hs(1), trusted);

    const double t_lo = cfg.at("fit_window").at(0).get<double>();
    const double t_hi = cfg.at("fit_window").at(1).get<double>();
    RateFit fit = fit_rate(e2, t_lo, t_hi);
    const double gamma_target = 0.5 * model.dim * (model.power - 1.0);
    const double delta_target = model.gauge_rate();

    RunArtifact art;
    art.series_columns = {"t", "E_L2", "E_H1", "I2", "ratio", "u_M11", "v_Linf"};
    // Profile-ratio diagnostics over the fit window; the series starts at
    // the first positive cadence time (I2 diverges at t = 0 for these
    // parameters).
    double dev_first = -1, dev_last = -1, ratio_min = 1e300, ratio_max = -1e300;
    double plateau_min = 1e300, plateau_max = -1e300;
    bool deviation_ok = true;
    for (std::size_t j = 0; j < e2.times.size(); ++j) {
        double t = e2.times[j];
        if (t <= 0) continue;
        double i2 = i2_norm(phi.phi, t, model);
        double ratio = i2 > 0 ? e2.values[j] / i2 : 0.0;
        std::size_t cadence_j =
            static_cast<std::size_t>(std::lround(t / opt.monitor_cadence));
        art.series_rows.push_back({t, e2.values[j], h1.values[j], i2, ratio,
                                   traj.monitors.at("u_M11")[cadence_j],
                                   traj.monitors.at("v_Linf")[cadence_j]});
        if (t >= t_lo && t <= t_hi) {
            ratio_min = std::min(ratio_min, ratio);
            ratio_max = std::max(ratio_max, ratio);
            double dev = std::fabs(ratio - 1.0);
            if (dev_first < 0) dev_first = dev;
            dev_last = dev;
            double plateau = h1.values[j] * t * std::exp(delta_target * t);
            plateau_min = std::min(plateau_min, plateau);
            plateau_max = std::max(plateau_max, plateau);
        }
    }
    deviation_ok = dev_first >= 0 && dev_last <= dev_first;
    const double plateau_var = plateau_min > 0 ? plateau_max / plateau_min - 1.0 : 1e300;

    // Sandwich misfit of the fitted model over the window.
    double sandwich = 0;
    for (std::size_t j = 0; j < e2.times.size(); ++j) {
        double t = e2.times[j];
        if (t < t_lo || t > t_hi) continue;
        double model_log = std::log(fit.C) - fit.gamma * std::log(t) - fit.delta * t;
        sandwich = std::max(sandwich, std::fabs(std::log(e2.values[j]) - model_log));
    }

    double drift = series_drift(traj.monitors.at("v_L2"));

    // Decay hypotheses on t in [2, T]: both monitors against their envelopes.
    DecayReport m11_rep = decay_check(traj, Mode::M11);
    double m11_growth = window_growth(m11_rep.times, m11_rep.envelope_ratio, 2.0, opt.T);
    double sigma_growth = window_growth(traj.times, traj.monitors.at("sigma_pullback"),
                                        2.0, opt.T);

    art.summary["results"] = {
        {"cauchy_gap", phi.cauchy_gap},
        {"extraction_time", phi.extraction_time},
        {"fit",
         {{"C", fit.C},
          {"gamma", fit.gamma},
          {"delta", fit.delta},
          {"residual", fit.residual}}},
        {"gamma_target", gamma_target},
        {"delta_target", delta_target},
        {"ratio_range", {ratio_min, ratio_max}},
        {"ratio_deviation_endpoints", {dev_first, dev_last}},
        {"h1_plateau_variation", plateau_var},
        {"sandwich_misfit", sandwich},
        {"l2_drift", drift},
        {"m11_envelope_growth", m11_growth},
        {"sigma_envelope_growth", sigma_growth}};
    art.summary["criteria"] = {
        {"rate_gamma",
         crit(std::fabs(fit.gamma - gamma_target) <= 0.1,
              {{"value", fit.gamma}, {"band", {gamma_target - 0.1, gamma_target + 0.1}}})},
        {"rate_delta",
         crit(std::fabs(fit.delta - delta_target) <= 0.04,
              {{"value", fit.delta},
               {"band", {delta_target - 0.04, delta_target + 0.04}}})},
        {"profile_ratio",
         crit(ratio_min >= 0.8 && ratio_max <= 1.2 && deviation_ok,
              {{"range", {ratio_min, ratio_max}},
               {"deviation_decreasing", deviation_ok}})},
        {"h1_plateau",
         crit(plateau_var < 0.25, {{"value", plateau_var}, {"threshold", 0.25}})},
        {"sandwich", crit(sandwich <= 0.1, {{"value", sandwich}, {"threshold", 0.1}})},
        {"l2_conserved", crit(drift <= 1e-10, {{"value", drift}, {"threshold", 1e-10}})},
        {"decay_envelopes",
         crit(m11_growth < 0.10 && sigma_growth < 0.10,
              {{"m11_growth", m11_growth}, {"sigma_growth", sigma_growth}})}};
    return art;
}

RunArtifact run_sdge(const json& cfg) {
    ModelParams model = parse_model(cfg);
    Grid g = parse_grid(cfg, model.dim);
    const json& pj = cfg.at("picard");
    PicardOptions popt;
    popt.iterations = pj.at("iterations").get<int>();
    popt.T = pj.at("T").get<double>();
    popt.dt = pj.at("dt").get<double>();
    popt.eval_stride = pj.at("eval_stride").get<int>();
    popt.working_norm = pj.at("norm").get<std::string>() == "L2" ? PicardOptions::Norm::L2
                                                                 : PicardOptions::Norm::M11;
    popt.window = m11_window(cfg);
    popt.lattice = TFLattice{pj.at("x_step").get<double>(), 0.0, -1, -1};

    Field u0 = build_initial(cfg.at("initial_data"), g);
    const double ratio = pj.at("amplitude_ratio").get<double>();
    Field u0_small = u0;
    for (auto& z : u0_small.samples) z *= ratio;

    PicardReport base = picard_iterate(u0, model, popt);
    PicardReport small = picard_iterate(u0_small, model, popt);

    // Decreasing steps counted until the residual has already fallen to
    // the quadrature noise floor; the step into the floor still counts.
    auto decreasing_pairs = [](const PicardReport& r) {
        int count = 0;
        double floor = 1e-10 * r.residuals.front();
        for (std::size_t k = 1; k < r.residuals.size(); ++k) {
            if (r.residuals[k - 1] < floor) break;
            if (r.residuals[k] < r.residuals[k - 1]) ++count;
        }
        return count;
    };
    int dec_base = decreasing_pairs(base), dec_small = decreasing_pairs(small);
    double factor_ratio =
        small.contraction_factor > 0 ? base.contraction_factor / small.contraction_factor : 0;
    const double target = std::pow(1.0 / ratio, model.power - 1.0);

    RunArtifact art;
    art.series_columns = {"iteration", "residual_base", "residual_small"};
    for (std::size_t k = 0; k < base.residuals.size(); ++k)
        art.series_rows.push_back(
            {static_cast<double>(k + 1), base.residuals[k], small.residuals[k]});
    art.summary["results"] = {{"residuals_base", base.residuals},
                              {"residuals_small", small.residuals},
                              {"factor_base", base.contraction_factor},
                              {"factor_small", small.contraction_factor},
                              {"factor_ratio", factor_ratio},
                              {"factor_ratio_target", target}};
    art.summary["criteria"] = {
        {"contraction",
         crit(dec_base >= 4,
              {{"decreasing_base", dec_base}, {"decreasing_small", dec_small}})},
        {"factor_scaling",
         crit(factor_ratio >= 0.7 * target && factor_ratio <= 1.3 * target,
              {{"value", factor_ratio}, {"band", {0.7 * target, 1.3 * target}}})}};
    return art;
}

RunArtifact run_modspace(const json& cfg) {
    ModelParams model = parse_model(cfg);
    Grid g = parse_grid(cfg, model.dim);
    const json& cx = cfg.at("counterexample");
    std::vector<int> terms = cx.at("terms").get<std::vector<int>>();
    WindowSpec bump = WindowSpec::bump(cx.at("bump_radius").get<double>());
    WindowSpec win = m11_window(cfg);
    TFLattice lat = m11_lattice(cfg);

    Field phi = window_field(bump, g);
    // xi1 moments of |phihat|^2 feeding the exact three-term expansion.
    Field phihat = fourier_transform(phi, Direction::forward);
    std::array<int, 3> idx{};
    double m0 = 0, m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < phihat.samples.size(); ++i) {
        decode_index(g, i, idx);
        double xi1 = g.xi(idx[0]);
        double e = std::norm(phihat.samples[i]);
        m0 += e;
        m1 += xi1 * e;
        m2 += xi1 * xi1 * e;
    }
    const double cell = std::pow(g.dual_spacing(), g.dim);
    m0 *= cell;
    m1 *= cell;
    m2 *= cell;

    RunArtifact art;
    art.series_columns = {"n_terms", "h1_moment", "identity", "m11"};
    double identity_err = 0;
    std::vector<double> lnN, moments, m11s;
    for (int N : terms) {
        Field fN = counterexample_field(N, bump, g);
        double moment = xi1_moment_sq(fN);
        double s3 = 0, s2 = 0, s1 = 0;
        for (int k = 1; k <= N; ++k) {
            double kd = k;
            s3 += 1.0 / (kd * kd * kd);
            s2 += 1.0 / (kd * kd);
            s1 += 1.0 / kd;
        }
        double identity = m2 * s3 + 2.0 * m1 * s2 + m0 * s1;
        double m11 = m11_norm(fN, win, lat);
        identity_err = std::max(identity_err, std::fabs(moment - identity) / identity);
        art.series_rows.push_back({static_cast<double>(N), moment, identity, m11});
        lnN.push_back(std::log(static_cast<double>(N)));
        moments.push_back(moment);
        m11s.push_back(m11);
    }

    // Slope of the moment against ln N; target ||phi||_L2^2 = m0.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < lnN.size(); ++j) {
        sx += lnN[j];
        sy += moments[j];
        sxx += lnN[j] * lnN[j];
        sxy += lnN[j] * moments[j];
    }
    double n = static_cast<double>(lnN.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double m11_change = m11s.size() >= 2
                            ? std::fabs(m11s.back() - m11s[m11s.size() - 2]) /
                                  m11s[m11s.size() - 2]
                            : 0.0;

    art.summary["results"] = {{"slope", slope},
                              {"slope_target", m0},
                              {"identity_rel_err_max", identity_err},
                              {"m11_rel_change_last_doubling", m11_change}};
    art.summary["criteria"] = {
        {"h1_slope",
         crit(std::fabs(slope - m0) <= 0.05 * m0, {{"value", slope}, {"target", m0}})},
        {"identity_match",
         crit(identity_err <= 1e-8, {{"value", identity_err}, {"threshold", 1e-8}})},
        {"m11_stable",
         crit(m11_change < 0.01, {{"value", m11_change}, {"threshold", 0.01}})}};
    return art;
}

RunArtifact run_mdfm(const json& cfg) {
    ModelParams model = parse_model(cfg);
    Grid g = parse_grid(cfg, model.dim);
    Field f = build_initial(cfg.at("initial_data"), g);
    const double fl2 = norm(f, NormSpec::L2());
    std::vector<double> times = cfg.at("mdfm").at("times").get<std::vector<double>>();

    RunArtifact art;
    art.series_columns = {"t", "consistency", "threshold"};
    bool consistent = true;
    double worst = 0;
    for (double t : times) {
        double err = mdfm_consistency(f, t);
        worst = std::max(worst, err);
        if (err > 1e-8 * fl2) consistent = false;
        art.series_rows.push_back({t, err, 1e-8 * fl2});
    }

    // Seeded family of localized modulated packets for the dispersive bound.
    const json& dj = cfg.at("dispersive");
    Grid gd;
    try {
        gd = make_grid(model.dim, dj.at("points").get<int>(), dj.at("length").get<double>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    std::mt19937_64 rng(cfg.at("seed").get<std::uint64_t>());
    const double band = dj.at("band").get<double>();
    const double sigma = dj.at("sigma").get<double>();
    const int modes = dj.at("modes").get<int>();
    const double shift = dj.at("shift").get<double>();
    const int family = dj.at("family_size").get<int>();
    std::vector<double> dtimes = dj.at("times").get<std::vector<double>>();

    double ratio_max = 0;
    std::vector<json> family_rows;
    for (int q = 0; q < family; ++q) {
        std::vector<double> x0(static_cast<std::size_t>(gd.dim));
        for (auto& c : x0) c = shift * (2.0 * u01(rng) - 1.0);
        std::vector<std::vector<double>> omega;
        std::vector<complex> coef;
        for (int m = 0; m < modes; ++m) {
            std::vector<double> w(static_cast<std::size_t>(gd.dim));
            for (auto& c : w) c = band * (2.0 * u01(rng) - 1.0);
            omega.push_back(std::move(w));
            coef.push_back(gauss(rng));
        }
        Field fd = zero_field(gd, Space::physical);
        std::array<int, 3> idx{};
        for (std::size_t i = 0; i < fd.samples.size(); ++i) {
            decode_index(gd, i, idx);
            double r2 = 0;
            complex mod = 0;
            for (int m = 0; m < modes; ++m) {
                double ph = 0;
                for (int d = 0; d < gd.dim; ++d)
                    ph += omega[static_cast<std::size_t>(m)][static_cast<std::size_t>(d)] *
                          gd.x(idx[static_cast<std::size_t>(d)]);
                mod += coef[static_cast<std::size_t>(m)] * std::polar(1.0, ph);
            }
            for (int d = 0; d < gd.dim; ++d) {
                double x = gd.x(idx[static_cast<std::size_t>(d)]) -
                           x0[static_cast<std::size_t>(d)];
                r2 += x * x;
            }
            fd.samples[i] = std::exp(-r2 / (2.0 * sigma * sigma)) * mod;
        }
        json ratios = json::array();
        for (double t : dtimes) {
            double r = dispersive_ratio(fd, t);
            ratio_max = std::max(ratio_max, r);
            ratios.push_back(r);
        }
        family_rows.push_back(ratios);
    }

    art.summary["results"] = {{"consistency_max", worst},
                              {"consistency_threshold", 1e-8 * fl2},
                              {"dispersive_ratios", family_rows},
                              {"dispersive_ratio_max", ratio_max}};
    art.summary["criteria"] = {
        {"consistency",
         crit(consistent, {{"value", worst}, {"threshold", 1e-8 * fl2}})},
        {"dispersive_bound",
         crit(ratio_max <= 1.05, {{"value", ratio_max}, {"threshold", 1.05}})}};
    return art;
}

RunArtifact run_elemlem(const json& cfg) {
    const json& ej = cfg.at("elemlem");
    const int t_points = ej.at("t_points").get<int>();
    RunArtifact art;
    art.series_columns = {"case", "alpha", "beta", "t", "r_beta"};
    bool band_ok = true, limit_ok = true;
    double limit_worst = 0;
    json cases_out = json::array();
    int ci = 0;
    for (const auto& c : ej.at("cases")) {
        double alpha = c.at(0).get<double>(), beta = c.at(1).get<double>();
        std::vector<double> ts;
        for (int j = 0; j < t_points; ++j)
            ts.push_back((10.0 + 20.0 * j / (t_points - 1)) / beta);
        std::vector<double> r = elemlem_check(alpha, beta, ts);
        double at_end = 0;
        for (std::size_t j = 0; j < ts.size(); ++j) {
            double rb = r[j] * beta;
            art.series_rows.push_back({static_cast<double>(ci), alpha, beta, ts[j], rb});
            if (rb < 0.5 || rb > 2.0) band_ok = false;
            at_end = rb;
        }
        double dev = std::fabs(at_end - 1.0);
        limit_worst = std::max(limit_worst, dev);
        if (dev > 0.05) limit_ok = false;
        cases_out.push_back(
            {{"alpha", alpha}, {"beta", beta}, {"r_beta_end", at_end}, {"deviation", dev}});
        ++ci;
    }
    art.summary["results"] = {{"cases", cases_out}};
    art.summary["criteria"] = {
        {"band", crit(band_ok, {{"band", {0.5, 2.0}}})},
        {"limit", crit(limit_ok, {{"value", limit_worst}, {"threshold", 0.05}})}};
    return art;
}

void validate(const ExperimentConfig& cfg) {
    const json& c = cfg.raw;
    try {
        ModelParams model = parse_model(c);
        Mode mode = parse_mode(c);
        try {
            validate_params(model, mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        parse_grid(c, model.dim);
        if (cfg.experiment == "simulate" || cfg.experiment == "scatter-rate")
            check_time_block(c);
        std::string itype = c.at("initial_data").at("type").get<std::string>();
        if (itype == "file") {
            std::string path = c.at("initial_data").at("path").get<std::string>();
            require(std::filesystem::exists(path), "initial_data file missing: " + path);
        } else {
            require(itype == "zero" || itype == "gaussian" ||
                        itype == "modulated_gaussian" || itype == "band_limited_bump",
                    "unknown initial_data type '" + itype + "'");
        }
        if (cfg.experiment == "scatter-rate") {
            double lo = c.at("fit_window").at(0).get<double>();
            double hi = c.at("fit_window").at(1).get<double>();
            double T = c.at("time").at("T").get<double>();
            double trusted = c.at("extraction").at("trusted_fraction").get<double>();
            require(lo > 0 && hi > lo, "fit_window must satisfy 0 < lo < hi");
            require(trusted > 0 && trusted <= 1, "extraction.trusted_fraction in (0, 1]");
            require(hi <= trusted * T, "fit_window must lie inside the trusted range");
            require(c.at("extraction").at("tol").get<double>() > 0,
                    "extraction.tol must be positive");
        }
        if (cfg.experiment == "sdge-check") {
            const json& p = c.at("picard");
            require(p.at("iterations").get<int>() >= 2, "picard.iterations must be >= 2");
            require(p.at("T").get<double>() > 0 && p.at("dt").get<double>() > 0,
                    "picard.T and picard.dt must be positive");
            require(p.at("eval_stride").get<int>() >= 1, "picard.eval_stride must be >= 1");
            double r = p.at("amplitude_ratio").get<double>();
            require(r > 0 && r < 1, "picard.amplitude_ratio must lie in (0, 1)");
            std::string nrm = p.at("norm").get<std::string>();
            require(nrm == "M11" || nrm == "L2", "picard.norm must be M11 or L2");
        }
        if (cfg.experiment == "modspace-demo") {
            const json& cx = c.at("counterexample");
            auto terms = cx.at("terms").get<std::vector<int>>();
            require(!terms.empty(), "counterexample.terms must be nonempty");
            int max_terms = 0;
            for (int N : terms) {
                require(N > 0, "counterexample.terms must be positive");
                max_terms = std::max(max_terms, N);
            }
            Grid g = parse_grid(c, parse_model(c).dim);
            require(g.xi_max() >= max_terms + 1,
                    "grid too coarse for the requested modulation count");
            double cycles = g.length / (2.0 * M_PI);
            require(std::fabs(cycles - std::lround(cycles)) <= 1e-9,
                    "grid length must be a multiple of 2*pi for the counterexample");
            require(cx.at("bump_radius").get<double>() <= 0.25 + 1e-12,
                    "counterexample bump radius must be <= 1/4");
        }
        if (cfg.experiment == "mdfm-check") {
            for (double t : c.at("mdfm").at("times").get<std::vector<double>>())
                require(t > 0, "mdfm.times must be positive");
            const json& d = c.at("dispersive");
            require(d.at("family_size").get<int>() >= 1 && d.at("modes").get<int>() >= 1,
                    "dispersive family must be nonempty");
            for (double t : d.at("times").get<std::vector<double>>())
                require(t > 0, "dispersive.times must be positive");
        }
        if (cfg.experiment == "elemlem-check") {
            const json& e = c.at("elemlem");
            require(e.at("t_points").get<int>() >= 2, "elemlem.t_points must be >= 2");
            for (const auto& pair : e.at("cases"))
                require(pair.is_array() && pair.size() == 2 && pair.at(1).get<double>() > 0,
                        "elemlem.cases entries must be [alpha, beta] with beta > 0");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig load_config(const std::string& experiment,
                             const std::filesystem::path& config_file,
                             const std::vector<std::string>& overrides) {
    bool known = false;
    for (const char* e : kExperiments) known = known || experiment == e;
    require(known, "unknown experiment '" + experiment + "'");

    json doc = base_defaults();
    doc.merge_patch(experiment_defaults(experiment));
    if (!config_file.empty()) {
        std::ifstream in(config_file);
        require(in.good(), "config file not readable: " + config_file.string());
        try {
            json file_doc = json::parse(in);
            doc.merge_patch(file_doc);
        } catch (const json::parse_error& e) {
            throw ConfigError("config parse error: " + std::string(e.what()));
        }
    }
    for (const auto& kv : overrides) apply_override(doc, kv);

    ExperimentConfig cfg{experiment, std::move(doc)};
    validate(cfg);
    return cfg;
}

RunArtifact run_experiment(const ExperimentConfig& cfg) {
    RunArtifact art;
    if (cfg.experiment == "simulate") art = run_simulate(cfg.raw);
    else if (cfg.experiment == "scatter-rate") art = run_scatter_rate(cfg.raw);
    else if (cfg.experiment == "sdge-check") art = run_sdge(cfg.raw);
    else if (cfg.experiment == "modspace-demo") art = run_modspace(cfg.raw);
    else if (cfg.experiment == "mdfm-check") art = run_mdfm(cfg.raw);
    else if (cfg.experiment == "elemlem-check") art = run_elemlem(cfg.raw);
    else throw ConfigError("unknown experiment '" + cfg.experiment + "'");

    art.summary["schema_version"] = 1;
    art.summary["experiment"] = cfg.experiment;
    art.summary["config"] = cfg.raw;
    return art;
}

void emit_report(const RunArtifact& artifact, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::ofstream series(out_dir / "series.tsv", std::ios::binary);
    if (!series.good())
        throw std::runtime_error("emit_report: cannot write " +
                                 (out_dir / "series.tsv").string());
    series << "#";
    for (std::size_t c = 0; c < artifact.series_columns.size(); ++c)
        series << (c == 0 ? "" : "\t") << artifact.series_columns[c];
    series << "\n";
    for (const auto& row : artifact.series_rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            series << (c == 0 ? "" : "\t") << format_double(row[c]);
        series << "\n";
    }

    std::ofstream summary(out_dir / "summary.json", std::ios::binary);
    if (!summary.good())
        throw std::runtime_error("emit_report: cannot write " +
                                 (out_dir / "summary.json").string());
    summary << artifact.summary.dump(2) << "\n";
}

int criteria_exit_code(const RunArtifact& artifact) {
    if (!artifact.summary.contains("criteria")) return 0;
    for (const auto& [name, c] : artifact.summary.at("criteria").items()) {
        (void)name;
        if (c.is_object() && c.contains("pass") && !c.at("pass").get<bool>()) return 1;
    }
    return 0;
}

}  // namespace dnlslab
