// Acceptance gate: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failures.

#include <cmath>
#include <cstdio>
#include <string>

#include "dnlslab/harness.hpp"
#include "dnlslab/norms.hpp"
#include "dnlslab/scattering.hpp"
#include "dnlslab/solver.hpp"
#include "oracles.hpp"

using namespace dnlslab;
using nlohmann::json;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", number,
                name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

const json& criterion(const RunArtifact& art, const char* key) {
    return art.summary.at("criteria").at(key);
}

void check_from(const RunArtifact& art, int number, const std::string& name,
                const char* key, const std::string& detail) {
    report(number, name, criterion(art, key).at("pass").get<bool>(), detail);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

int main() {
    std::printf("# acceptance: reference configuration, all criteria\n");

    // Criteria 1-5 and 7 come from one scatter-rate run on the reference
    // configuration.
    RunArtifact sr = run_experiment(load_config("scatter-rate", {}, {}));
    const json& fit = sr.summary.at("results").at("fit");
    {
        bool g_ok = criterion(sr, "rate_gamma").at("pass").get<bool>();
        bool d_ok = criterion(sr, "rate_delta").at("pass").get<bool>();
        report(1, "sharp rate", g_ok && d_ok,
               "gamma=" + fmt(fit.at("gamma").get<double>()) + " band [0.9,1.1] (" +
               (g_ok ? "ok" : "out") + "); delta=" + fmt(fit.at("delta").get<double>()) +
               " band [1.96,2.04] (" + (d_ok ? "ok" : "out") + ")");
    }
    {
        const json& pr = criterion(sr, "profile_ratio");
        check_from(sr, 2, "leading-profile ratio", "profile_ratio",
                   "range [" + fmt(pr.at("range").at(0).get<double>()) + "," +
                   fmt(pr.at("range").at(1).get<double>()) + "] in [0.8,1.2], deviation decreasing");
    }
    check_from(sr, 3, "H1 upper bound plateau", "h1_plateau",
               "variation " + fmt(criterion(sr, "h1_plateau").at("value").get<double>()) +
               " < 0.25");
    check_from(sr, 4, "two-sided sandwich", "sandwich",
               "max log misfit " + fmt(criterion(sr, "sandwich").at("value").get<double>()) +
               " <= 0.1");
    check_from(sr, 5, "exact decay law", "l2_conserved",
               "relative L2 drift " +
               fmt(criterion(sr, "l2_conserved").at("value").get<double>()) + " <= 1e-10");

    // Criterion 6: SDGE contraction.
    RunArtifact sd = run_experiment(load_config("sdge-check", {}, {}));
    {
        const json& c = criterion(sd, "contraction");
        const json& f = criterion(sd, "factor_scaling");
        bool pass = c.at("pass").get<bool>() && f.at("pass").get<bool>();
        report(6, "SDGE contraction", pass,
               std::to_string(c.at("decreasing_base").get<int>()) +
               " geometric steps (>= 4); factor ratio " +
               fmt(f.at("value").get<double>()) + " in 4 +/- 30%");
    }

    // Criterion 7: decay hypotheses on [2, 16].
    {
        const json& d = criterion(sr, "decay_envelopes");
        check_from(sr, 7, "decay hypotheses", "decay_envelopes",
                   "M11 envelope growth " + fmt(d.at("m11_growth").get<double>()) +
                   ", Sigma growth " + fmt(d.at("sigma_growth").get<double>()) + " < 0.10");
    }

    // Criterion 8: elementary lemma band + limit, plus the quadrature cross-check.
    RunArtifact el = run_experiment(load_config("elemlem-check", {}, {}));
    {
        double quad_worst = 0;
        for (auto [alpha, beta] : {std::pair{-1.0, 2.0}, {0.0, 1.0}, {3.0, 1.0}}) {
            for (double t : {10.0 / beta, 30.0 / beta}) {
                double lib = tail_integral(alpha, beta, t);
                double upper = t + 60.0 / beta;  // truncation tail far below 1e-10 relative
                double quad = oracles::integrate(
                    [alpha, beta](double s) {
                        return std::pow(s, alpha) * std::exp(-beta * s);
                    },
                    t, upper, 1e-13 * lib);
                quad_worst = std::max(quad_worst, std::fabs(lib - quad) / lib);
            }
        }
        bool band = criterion(el, "band").at("pass").get<bool>();
        bool limit = criterion(el, "limit").at("pass").get<bool>();
        bool quad_ok = quad_worst <= 1e-10;
        report(8, "elementary lemma", band && limit && quad_ok,
               "band " + std::string(band ? "ok" : "violated") + "; limit deviation " +
               fmt(criterion(el, "limit").at("value").get<double>()) +
               " (<= 0.05); quadrature gap " + fmt(quad_worst) + " <= 1e-10");
    }

    // Criterion 9: MDFM factorization consistency.
    RunArtifact md = run_experiment(load_config("mdfm-check", {}, {}));
    check_from(md, 9, "MDFM factorization", "consistency",
               "worst consistency error " +
               fmt(criterion(md, "consistency").at("value").get<double>()) +
               " <= 1e-8 * ||f||");

    // Criterion 10: counterexample family.
    RunArtifact ms = run_experiment(load_config("modspace-demo", {}, {}));
    {
        bool slope = criterion(ms, "h1_slope").at("pass").get<bool>();
        bool ident = criterion(ms, "identity_match").at("pass").get<bool>();
        bool stable = criterion(ms, "m11_stable").at("pass").get<bool>();
        report(10, "M11 counterexample", slope && ident && stable,
               "H1 slope " + fmt(criterion(ms, "h1_slope").at("value").get<double>()) +
               " vs target " + fmt(criterion(ms, "h1_slope").at("target").get<double>()) +
               " (5%); identity " + fmt(criterion(ms, "identity_match").at("value").get<double>()) +
               " <= 1e-8; m11 change " +
               fmt(criterion(ms, "m11_stable").at("value").get<double>()) + " < 1%");
    }

    // Criterion 11: splitting order via self-convergence at t = 2 on the
    // reference spatial grid.
    {
        ModelParams p;
        p.dim = 1;
        p.power = 3;
        p.damping = 1;
        p.sign = +1;
        Grid g = make_grid(1, 4096, 256.0);
        Field u0 = oracles::gaussian_field(g, 0.1);
        auto final_state = [&](double dt) {
            SimOptions o;
            o.T = 2.0;
            o.dt = dt;
            o.monitor_cadence = 0.2;
            o.track_increments = false;
            o.keep_states = true;
            return simulate(u0, p, o).states.back();
        };
        Field a = final_state(0.004);
        Field b = final_state(0.002);
        Field c = final_state(0.001);
        double factor = oracles::rel_l2_diff(a, b) / oracles::rel_l2_diff(b, c);
        report(11, "splitting order", factor >= 3.2 && factor <= 4.8,
               "error contraction factor " + fmt(factor) + " in [3.2, 4.8]");
    }

    std::printf("# acceptance: %d failure(s)\n", failures);
    return failures;
}
