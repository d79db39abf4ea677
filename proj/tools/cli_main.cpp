// Command-line front end: configuration, dispatch, table emission, and the
// one-shot verification suites.
#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "kerrteuk/checks.hpp"
#include "kerrteuk/radial.hpp"
#include "kerrteuk/tetrad.hpp"
#include "kerrteuk/unruh.hpp"

namespace {

std::map<std::string, std::string> collect_flags(const std::string& M, const std::string& a,
                                                 const std::string& tol, const std::string& seed,
                                                 const std::string& outdir,
                                                 const std::string& format, bool serial) {
    std::map<std::string, std::string> f;
    if (!M.empty()) f["M"] = M;
    if (!a.empty()) f["a"] = a;
    if (!tol.empty()) f["tol"] = tol;
    if (!seed.empty()) f["seed"] = seed;
    if (!outdir.empty()) f["outdir"] = outdir;
    if (!format.empty()) f["format"] = format;
    if (serial) f["serial"] = "1";
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kerrteuk: verified numerics for spin-weighted Teukolsky fields on Kerr"};
    app.require_subcommand(1);

    std::string cfg_path, M_s, a_s, tol_s, seed_s, outdir_s, format_s;
    bool serial = false;
    app.add_option("--config", cfg_path, "JSON configuration file");
    app.add_option("--M", M_s, "black hole mass");
    app.add_option("--a", a_s, "spin parameter");
    app.add_option("--tol", tol_s, "default tolerance");
    app.add_option("--seed", seed_s, "seed for random data families");
    app.add_option("--outdir", outdir_s, "output directory");
    app.add_option("--format", format_s, "report format: json|csv");
    app.add_flag("--serial", serial, "disable the parallel sweep kernels");

    // geometry eval
    auto* geo = app.add_subcommand("geometry", "background quantities");
    auto* geoeval = geo->add_subcommand("eval", "print horizon scalars and metric at a point");
    double ge_r = 3.0, ge_th = 1.3;
    geoeval->add_option("--r", ge_r);
    geoeval->add_option("--theta", ge_th);

    // tetrad check
    auto* tet = app.add_subcommand("tetrad", "null frames and potentials");
    auto* tetcheck = tet->add_subcommand("check", "run the tetrad identity suite");

    // angular
    auto* ang = app.add_subcommand("angular", "spheroidal harmonics and TS constants");
    auto* spher = ang->add_subcommand("spheroidal", "eigenvalue table");
    int sp_s = 2, sp_m = 2;
    double sp_c = 0.5;
    int sp_lmax = 8;
    spher->add_option("--s", sp_s);
    spher->add_option("--m", sp_m);
    spher->add_option("--c", sp_c);
    spher->add_option("--lmax", sp_lmax);
    auto* tsconst = ang->add_subcommand("tsconst", "TS constants over the configured grid");

    // radial solve
    auto* rad = app.add_subcommand("radial", "mode solutions");
    auto* radsolve = rad->add_subcommand("solve", "integrate a mode and export CSV");
    int rs_s = 2, rs_m = 2, rs_l = 2;
    double rs_omega = 0.41, rs_rmax = 30.0;
    std::string rs_bc = "ingoing", rs_out = "mode.csv";
    radsolve->add_option("--s", rs_s);
    radsolve->add_option("--m", rs_m);
    radsolve->add_option("--l", rs_l);
    radsolve->add_option("--omega", rs_omega);
    radsolve->add_option("--rmax", rs_rmax);
    radsolve->add_option("--bc", rs_bc, "ingoing|outgoing");
    radsolve->add_option("--out", rs_out);

    // ts check
    auto* ts = app.add_subcommand("ts", "Teukolsky-Starobinsky identities");
    auto* tscheck = ts->add_subcommand("check", "run the TS identity suite");

    // unruh kernel
    auto* unr = app.add_subcommand("unruh", "state kernels");
    auto* kern = unr->add_subcommand("kernel", "print the thermal kernels on a frequency grid");
    double uk_xmax = 3.0;
    int uk_n = 13;
    kern->add_option("--xmax", uk_xmax);
    kern->add_option("--n", uk_n);

    // verify
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all";
    ver->add_option("suite", suite, "geometry|tetrad|angular|radial|tsid|unruh|all");

    CLI11_PARSE(app, argc, argv);

    ktk::RunConfig cfg;
    try {
        cfg = ktk::parse_config(cfg_path,
                                collect_flags(M_s, a_s, tol_s, seed_s, outdir_s, format_s, serial));
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*geoeval) {
            auto h = ktk::horizons(cfg.params);
            std::cout << "r_+ = " << h.r_plus << "\nr_- = " << h.r_minus
                      << "\nkappa_+ = " << h.kappa_plus << "\nkappa_- = " << h.kappa_minus
                      << "\nOmega_+ = " << h.omega_plus << '\n';
            ktk::ChartPoint p{ktk::Chart::BL, {0.0, ge_r, ge_th, 0.0}};
            auto md = ktk::metric(cfg.params, p);
            std::cout << "g (BL) at r=" << ge_r << ", theta=" << ge_th << ":\n";
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) std::cout << md.g[i][j] << (j == 3 ? '\n' : ' ');
            }
            return 0;
        }
        if (*spher) {
            auto modes = ktk::spheroidal_solve(sp_s, sp_m, sp_c, sp_lmax);
            std::cout << "s,m,c,ell,lambda_bar,lambda_S,residual\n";
            for (const auto& md : modes)
                std::cout << md.s << ',' << md.m << ',' << md.c << ',' << md.ell << ','
                          << md.lambda_bar << ',' << md.lambda_S << ',' << md.residual << '\n';
            return 0;
        }
        if (*tsconst) {
            std::cout << "s,omega,m,ell,N,bound_margin\n";
            for (int s : cfg.spins) {
                if (s == 0) continue;
                for (double omega : cfg.omegas)
                    for (int m : cfg.ms)
                        for (int ell = std::max(s, std::abs(m)); ell <= cfg.lmax; ++ell) {
                            auto te = ktk::ts_eigenvalue(cfg.params, s, omega, m, ell);
                            std::cout << s << ',' << omega << ',' << m << ',' << ell << ',' << te.N
                                      << ',' << te.bound_margin << '\n';
                        }
            }
            return 0;
        }
        if (*radsolve) {
            auto spec = ktk::make_mode_spec(cfg.params, rs_s, rs_omega, rs_m, rs_l);
            auto grid = ktk::default_output_grid(cfg.params, cfg.params.r_plus() + 0.01, rs_rmax);
            auto bc = (rs_bc == "outgoing") ? ktk::RadialBc::HorizonOutgoing
                                            : ktk::RadialBc::HorizonIngoing;
            auto sol = ktk::integrate_mode(spec, bc, {cfg.params.r_plus() + 0.01, rs_rmax}, cfg.tol * 1e-3,
                                           grid);
            ktk::export_solution_csv(sol, rs_out);
            std::cout << "wrote " << rs_out << " (ode residual " << sol.ode_residual << ")\n";
            return 0;
        }
        if (*kern) {
            double kp = cfg.params.kappa_plus();
            std::cout << "x,chi_plus,chi_minus,X_plus,X_minus\n";
            for (int i = 0; i < uk_n; ++i) {
                double x = -uk_xmax + 2.0 * uk_xmax * i / (uk_n - 1);
                std::cout << x << ',' << ktk::chi_kernel(x, kp, +1) << ','
                          << ktk::chi_kernel(x, kp, -1) << ',' << ktk::X_kernel(x, +1) << ','
                          << ktk::X_kernel(x, -1) << '\n';
            }
            return 0;
        }

        std::string which;
        if (*tetcheck) which = "tetrad";
        else if (*tscheck) which = "tsid";
        else if (*ver) which = suite;
        else {
            std::cerr << "no action selected\n";
            return 2;
        }
        auto rows = ktk::run_suite(cfg, which);
        std::filesystem::create_directories(cfg.outdir);
        std::string base = cfg.outdir + "/report_" + which;
        if (cfg.format == "csv") ktk::write_report_csv(base + ".csv", rows);
        else ktk::write_report_json(base + ".json", rows);
        int npass = 0;
        for (const auto& r : rows) {
            std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.id << "  residual=" << r.residual
                      << "  tol=" << r.tol << "  (" << r.eq_tag << ")\n";
            if (r.pass) ++npass;
        }
        std::cout << npass << "/" << rows.size() << " checks passed\n";
        return ktk::suite_exit_code(rows);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
