#include "kerrteuk/radial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "kerrteuk/fft.hpp"

namespace ktk {

ModeSpec make_mode_spec(const KerrParams& par, int s, double omega, int m, int ell) {
    ModeSpec spec;
    spec.params = par;
    spec.s = s;
    spec.omega = omega;
    spec.m = m;
    spec.ell = ell;
    int as = std::abs(s);
    int lmax = std::max(ell + 4, std::max(as, std::abs(m)) + 4);
    auto modes = spheroidal_solve(as, m, par.a * omega, lmax);
    bool found = false;
    for (const auto& md : modes)
        if (md.ell == ell) {
            spec.lambda_bar = md.lambda_bar;
            // separation constant: lambda_S(sigma=+|s|) = lambda_bar - |s|;
            // for sigma=-|s| the conjugation relation gives lambda_S = lambda_bar
            spec.lambda_S = (s >= 0) ? md.lambda_S : md.lambda_bar;
            found = true;
        }
    if (!found) throw std::invalid_argument("make_mode_spec: ell not resolved");
    return spec;
}

// angular profile of the mode as a real theta-function on the given grid; for
// negative spin this is the reflected-(m,c) spheroidal of the conjugate family
ThetaFun mode_angular_profile(const ThetaGrid& g, const ModeSpec& spec) {
    int as = std::abs(spec.s);
    int meff = (spec.s >= 0) ? spec.m : -spec.m;
    double ceff = (spec.s >= 0) ? spec.params.a * spec.omega : -spec.params.a * spec.omega;
    int lmax = std::max(spec.ell + 4, std::max(as, std::abs(meff)) + 4);
    auto modes = spheroidal_solve(as, meff, ceff, lmax);
    for (const auto& md : modes)
        if (md.ell == spec.ell) {
            ThetaFun f(mode_parity(spec.s, spec.m), g.n);
            for (std::size_t k = 0; k < md.coeffs.size(); ++k) {
                int l = md.lmin + int(k);
                for (int j = 0; j < g.n; ++j)
                    f.v[j] += md.coeffs[k] * swsh_theta(as, l, meff, g.theta[j]);
            }
            return f;
        }
    throw std::invalid_argument("mode_angular_profile: ell not resolved");
}

namespace {

constexpr int KJ = 4;
using J4 = Jet2<KJ>;

struct JField {
    J4 f;
    int s, w;
};

JField tho_j(const geo::GeoSeries<KJ>& G, double omega, int m, const JField& F) {
    const cplx I(0.0, 1.0);
    J4 val = G.l[0] * (-I * omega) * F.f + G.l[1] * F.f.du() + G.l[3] * (I * double(m)) * F.f -
             (double(F.w + F.s) * G.lw + double(F.w - F.s) * G.lwb) * F.f;
    return {val, F.s, F.w + 1};
}

JField thop_j(const geo::GeoSeries<KJ>& G, double omega, int m, const JField& F) {
    const cplx I(0.0, 1.0);
    J4 val = G.n[0] * (-I * omega) * F.f + G.n[1] * F.f.du() + G.n[3] * (I * double(m)) * F.f -
             (double(F.w + F.s) * G.nw + double(F.w - F.s) * G.nwb) * F.f;
    return {val, F.s, F.w - 1};
}

}  // namespace

void RadialODE::coeffs(cplx r, cplx& c0, cplx& c1, cplx& c2) const {
    auto G = geo::geo_series_bl<KJ>(par, r, 0.5 * M_PI);
    const cplx I(0.0, 1.0);
    cplx vals[3];
    for (int k = 0; k < 3; ++k) {
        J4 f;
        if (k == 0) f = J4(cplx(1.0));
        else {
            f = J4(cplx(0.0));
            f.coeff(k, 0) = 1.0;
        }
        JField F{f, s, s};
        JField t1 = thop_j(G, omega, m, F);
        t1.f -= 2.0 * double(s) * (G.rhop * F.f);
        JField t2 = tho_j(G, omega, m, t1);
        t2.f -= (G.rho + G.rhob) * t1.f;
        J4 Rs = G.rho2 * t2.f + 0.5 * double(2 * s - 1) * ((G.zeta + G.zetab) * ((-I * omega) * F.f));
        vals[k] = Rs.val();
    }
    c0 = vals[0] - lambda_S;
    c1 = vals[1];
    c2 = 0.5 * vals[2];
}

void bpt_reference_coeffs(const KerrParams& par, int s, double omega, int m, double lambda_bpt,
                          double r, cplx& c0, cplx& c1, cplx& c2) {
    const double a = par.a, M = par.M;
    const double Delta = par.Delta(r);
    const double K = (r * r + a * a) * omega - a * m;
    const cplx I(0.0, 1.0);
    c2 = Delta;
    c1 = double(s + 1) * (2.0 * r - 2.0 * M);
    c0 = (K * K - 2.0 * I * double(s) * (r - M) * K) / Delta + 4.0 * I * double(s) * omega * r -
         lambda_bpt;
}

namespace {

// Taylor coefficients of p(u) = u c1/c2 and q(u) = u^2 c0/c2 around r_+
void pq_taylor(const RadialODE& ode, int nterms, std::vector<cplx>& p, std::vector<cplx>& q) {
    const double rp = ode.par.r_plus(), rm = ode.par.r_minus();
    const double radius = 0.35 * (rp - rm);
    const int N = 64;
    std::vector<cplx> pv(N), qv(N);
    for (int k = 0; k < N; ++k) {
        cplx u = radius * std::exp(cplx(0.0, 2.0 * M_PI * k / N));
        cplx c0, c1, c2;
        ode.coeffs(cplx(rp) + u, c0, c1, c2);
        pv[k] = u * c1 / c2;
        qv[k] = u * u * c0 / c2;
    }
    fft_inplace(pv, -1);
    fft_inplace(qv, -1);
    p.resize(nterms + 2);
    q.resize(nterms + 2);
    for (int j = 0; j < nterms + 2; ++j) {
        p[j] = pv[j] / double(N) / std::pow(radius, j);
        q[j] = qv[j] / double(N) / std::pow(radius, j);
    }
}

}  // namespace

IndicialData indicial_exponents(const RadialODE& ode) {
    std::vector<cplx> p, q;
    pq_taylor(ode, 2, p, q);
    // alpha^2 + (p0 - 1) alpha + q0 = 0
    cplx b = p[0] - 1.0, c = q[0];
    cplx disc = std::sqrt(b * b - 4.0 * c);
    cplx a1 = 0.5 * (-b + disc), a2 = 0.5 * (-b - disc);
    const double kp = ode.par.kappa_plus();
    const double kh = ode.omega - ode.m * ode.par.omega_plus();
    cplx alpha_in_pred = cplx(-double(ode.s), -kh / (2.0 * kp));
    IndicialData out;
    if (std::abs(a1 - alpha_in_pred) < std::abs(a2 - alpha_in_pred)) {
        out.alpha_ingoing = a1;
        out.alpha_outgoing = a2;
    } else {
        out.alpha_ingoing = a2;
        out.alpha_outgoing = a1;
    }
    cplx sep = out.alpha_ingoing - out.alpha_outgoing;
    double nearest = std::round(sep.real());
    out.resonant = std::abs(sep - cplx(nearest)) < 1e-8;
    return out;
}

FrobeniusData horizon_frobenius(const RadialODE& ode, RadialBc bc, double eps, int nterms) {
    if (!(eps >= 1e-8 && eps <= 1e-3))
        throw std::invalid_argument("horizon_frobenius: eps in [1e-8, 1e-3]");
    auto ind = indicial_exponents(ode);
    FrobeniusData out;
    out.alpha = (bc == RadialBc::HorizonIngoing) ? ind.alpha_ingoing : ind.alpha_outgoing;
    std::vector<cplx> p, q;
    pq_taylor(ode, nterms, p, q);
    auto F = [&](cplx x) { return x * (x - 1.0) + p[0] * x + q[0]; };
    out.series.assign(std::size_t(nterms), cplx(0.0));
    out.series[0] = 1.0;
    for (int k = 1; k < nterms; ++k) {
        cplx rhs = 0.0;
        for (int j = 0; j < k; ++j)
            rhs -= out.series[std::size_t(j)] * ((out.alpha + double(j)) * p[std::size_t(k - j)] +
                                                 q[std::size_t(k - j)]);
        cplx denom = F(out.alpha + double(k));
        if (std::abs(denom) < 1e-9 * (1.0 + std::abs(rhs))) {
            out.resonant = true;
            throw std::domain_error(
                "horizon_frobenius: resonant indicial exponents need a log branch; "
                "restart the integration from a smaller eps");
        }
        out.series[std::size_t(k)] = rhs / denom;
    }
    const double rp = ode.par.r_plus();
    const double u = rp * eps;
    cplx S = 0.0, dS = 0.0;
    for (int k = nterms - 1; k >= 0; --k) {
        S = S * u + out.series[std::size_t(k)];
        if (k >= 1) dS = dS * u + double(k) * out.series[std::size_t(k)];
    }
    cplx ua = std::pow(cplx(u), out.alpha);
    out.R = ua * S;
    out.dR = ua * (out.alpha / u * S + dS);
    out.truncation_estimate =
        std::abs(out.series[std::size_t(nterms - 1)] * std::pow(u, nterms - 1)) /
        std::max(std::abs(S), 1e-300);
    return out;
}

InfinitySeries infinity_series(const RadialODE& ode, int sigma, double r_match) {
    InfinitySeries out;
    out.sigma = sigma;
    const cplx I(0.0, 1.0);
    const cplx iw = I * double(sigma) * ode.omega;
    // leading coefficients of c2 ~ A2 r^2, c1 ~ B1 r, c0 ~ C2 r^2 + C1 r from a large circle
    const double R0 = 4.0e3;
    const int N = 32;
    std::vector<cplx> c2v(N), c1v(N), c0v(N);
    for (int k = 0; k < N; ++k) {
        cplx r = R0 * std::exp(cplx(0.0, 2.0 * M_PI * k / N));
        cplx c0, c1, c2;
        ode.coeffs(r, c0, c1, c2);
        c2v[k] = c2;
        c1v[k] = c1;
        c0v[k] = c0;
    }
    fft_inplace(c2v, -1);
    fft_inplace(c1v, -1);
    fft_inplace(c0v, -1);
    auto coef = [&](std::vector<cplx>& v, int pow) {
        // coefficient of r^pow: circle FFT picks e^{i pow th} component
        int idx = (pow % N + N) % N;
        return v[std::size_t(idx)] / double(N) / std::pow(R0, pow);
    };
    cplx A2 = coef(c2v, 2), A1 = coef(c2v, 1);
    cplx B1 = coef(c1v, 1);
    cplx C1 = coef(c0v, 1);
    (void)A1;
    // order-r balance: 2 iw rho A2 + A1 (iw)^2 + B1 iw + C1 = 0
    out.rho = -(A1 * iw * iw + B1 * iw + C1) / (2.0 * iw * A2);

    // fit b1..b3 by least squares of the ODE residual near r_match
    auto trial = [&](double r, const std::array<cplx, 3>& b, cplx& R, cplx& dR, cplx& d2R) {
        // R = e^{iw r} r^rho (1 + sum b_k r^-k) and analytic derivatives
        cplx pref = std::exp(iw * r) * std::pow(cplx(r), out.rho);
        cplx S = 1.0, Sp = 0.0, Spp = 0.0;
        for (int k = 1; k <= 3; ++k) {
            S += b[std::size_t(k - 1)] * std::pow(r, -k);
            Sp += b[std::size_t(k - 1)] * double(-k) * std::pow(r, -k - 1);
            Spp += b[std::size_t(k - 1)] * double(k) * double(k + 1) * std::pow(r, -k - 2);
        }
        cplx L = iw + out.rho / r;       // (log prefactor)'
        cplx Lp = -out.rho / (r * r);
        R = pref * S;
        dR = pref * (L * S + Sp);
        d2R = pref * ((L * L + Lp) * S + 2.0 * L * Sp + Spp);
    };
    const int npts = 8;
    Eigen::MatrixXcd Amat(npts, 3);
    Eigen::VectorXcd rhs(npts);
    for (int it = 0; it < 2; ++it) {
        for (int i = 0; i < npts; ++i) {
            double r = r_match * (0.9 + 0.05 * i);
            cplx c0, c1, c2;
            ode.coeffs(cplx(r), c0, c1, c2);
            // residual is linear in the b's: L[R0] + sum_k b_k L[e r^{rho-k}] = 0
            std::array<cplx, 3> zero{};
            cplx R, dR, d2R;
            trial(r, zero, R, dR, d2R);
            rhs(i) = -(c2 * d2R + c1 * dR + c0 * R);
            for (int k = 1; k <= 3; ++k) {
                std::array<cplx, 3> bk{};
                bk[std::size_t(k - 1)] = 1.0;
                cplx Rk, dRk, d2Rk;
                trial(r, bk, Rk, dRk, d2Rk);
                // subtract the b-independent part
                Amat(i, k - 1) = (c2 * (d2Rk - d2R) + c1 * (dRk - dR) + c0 * (Rk - R));
            }
        }
        Eigen::VectorXcd b = Amat.colPivHouseholderQr().solve(rhs);
        for (int k = 0; k < 3; ++k) out.b[std::size_t(k)] = b(k);
        Eigen::VectorXcd res = Amat * b - rhs;
        double scale = 0.0;
        for (int i = 0; i < npts; ++i) scale = std::max(scale, std::abs(rhs(i)));
        out.fit_residual = res.norm() / std::max(scale, 1e-300);
        break;
    }
    return out;
}

std::vector<double> default_output_grid(const KerrParams& par, double r_lo, double r_hi, int n) {
    std::vector<double> out(std::size_t(n), 0.0);
    const double rp = par.r_plus();
    double u0 = std::log(r_lo - rp), u1 = std::log(r_hi - rp);
    for (int i = 0; i < n; ++i)
        out[std::size_t(i)] = rp + std::exp(u0 + (u1 - u0) * double(i) / double(n - 1));
    out.front() = r_lo;
    out.back() = r_hi;
    return out;
}

namespace {

// Dormand-Prince 5(4) step on complex state
template <int NS>
struct DP54 {
    using State = std::array<cplx, NS>;
    template <typename F>
    static void step(F&& rhs, double x, const State& y, double h, State& y5, double& err,
                     const State& scale) {
        static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
        static const double A[7][6] = {
            {},
            {1.0 / 5},
            {3.0 / 40, 9.0 / 40},
            {44.0 / 45, -56.0 / 15, 32.0 / 9},
            {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
            {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
            {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
        static const double b5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                     11.0 / 84, 0};
        static const double b4[7] = {5179.0 / 57600, 0,           7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
        State k[7];
        for (int i = 0; i < 7; ++i) {
            State yi = y;
            for (int j = 0; j < i; ++j)
                for (int n = 0; n < NS; ++n) yi[n] += h * A[i][j] * k[j][n];
            k[i] = rhs(x + c[i] * h, yi);
        }
        y5 = y;
        State y4 = y;
        for (int i = 0; i < 7; ++i)
            for (int n = 0; n < NS; ++n) {
                y5[n] += h * b5[i] * k[i][n];
                y4[n] += h * b4[i] * k[i][n];
            }
        err = 0.0;
        for (int n = 0; n < NS; ++n)
            err = std::max(err, std::abs(y5[n] - y4[n]) / std::abs(scale[n]));
    }
};

}  // namespace

RadialSolution integrate_mode(const ModeSpec& spec, RadialBc bc,
                              std::pair<double, double> r_range, double tol,
                              const std::vector<double>& output_r, double frobenius_eps) {
    RadialODE ode(spec);
    const KerrParams& par = spec.params;
    const double rp = par.r_plus();
    // series data close to the horizon, integration from there outward
    double r_start = std::min(rp * (1.0 + frobenius_eps), r_range.first);
    if (r_start <= rp) r_start = rp * (1.0 + frobenius_eps);
    FrobeniusData fd;
    try {
        fd = horizon_frobenius(ode, bc, (r_start - rp) / rp);
    } catch (const std::domain_error&) {
        // log branch: restart from a smaller eps with the leading term only
        double eps2 = 1e-8;
        r_start = rp * (1.0 + eps2);
        auto ind = indicial_exponents(ode);
        fd.alpha = (bc == RadialBc::HorizonIngoing) ? ind.alpha_ingoing : ind.alpha_outgoing;
        double u = rp * eps2;
        fd.R = std::pow(cplx(u), fd.alpha);
        fd.dR = fd.alpha / u * fd.R;
        fd.resonant = true;
    }

    RadialSolution sol;
    sol.mode = spec;
    sol.bc = bc;
    sol.r = output_r;
    sol.value.assign(output_r.size(), 0.0);
    sol.deriv.assign(output_r.size(), 0.0);

    // state (R, S = dR/dr_*, r) integrated in r_* up to 4M, then (R, R') in r
    const double a = par.a;
    auto varpi2 = [&](double r) { return r * r + a * a; };
    auto rhs_star = [&](double, const std::array<cplx, 3>& y) {
        double r = y[2].real();
        double Delta = par.Delta(r);
        double f = Delta / varpi2(r);
        cplx c0, c1, c2;
        ode.coeffs(cplx(r), c0, c1, c2);
        // R' = S / f ; S' = f^2 R'' + f f' R' -> express R'' from the ODE
        double fp = (2.0 * r * Delta - varpi2(r) * (2.0 * r - 2.0 * par.M)) / (varpi2(r) * varpi2(r));
        // note: f = Delta/varpi2, df/dr = (Delta' varpi2 - 2 r Delta)/varpi2^2
        fp = ((2.0 * r - 2.0 * par.M) * varpi2(r) - 2.0 * r * Delta) / (varpi2(r) * varpi2(r));
        cplx Rp = y[1] / f;
        cplx Rpp = -(c1 * Rp + c0 * y[0]) / c2;
        std::array<cplx, 3> dy;
        dy[0] = y[1];
        dy[1] = f * (fp * Rp + f * Rpp);
        dy[2] = f;
        return dy;
    };
    auto rhs_r = [&](double x, const std::array<cplx, 2>& y) {
        cplx c0, c1, c2;
        ode.coeffs(cplx(x), c0, c1, c2);
        std::array<cplx, 2> dy;
        dy[0] = y[1];
        dy[1] = -(c1 * y[1] + c0 * y[0]) / c2;
        return dy;
    };

    std::size_t iout = 0;
    while (iout < output_r.size() && output_r[iout] < r_start * (1.0 - 1e-12)) ++iout;

    const double r_switch = std::min(4.0 * par.M, r_range.second);
    double r_cur = r_start;
    cplx R = fd.R, Rp = fd.dR;

    auto record = [&](double rq, cplx Rv, cplx Rpv) {
        sol.value[iout] = Rv;
        sol.deriv[iout] = Rpv;
        ++iout;
        (void)rq;
    };

    // phase 1: r_* variable up to r_switch
    if (r_cur < r_switch) {
        double rstar = 0.0;  // offset irrelevant
        std::array<cplx, 3> y{R, (par.Delta(r_cur) / varpi2(r_cur)) * Rp, cplx(r_cur)};
        double h = 1e-3;
        auto advance_to_r = [&](double r_target) {
            while (y[2].real() < r_target * (1.0 - 1e-13)) {
                // estimate dr_* to target and clamp step
                double drstar = (tortoise_and_twist(par, r_target, y[2].real())).r_star;
                double hstep = std::min(h, drstar);
                bool last = (hstep >= drstar * (1.0 - 1e-12));
                std::array<cplx, 3> y5;
                double err;
                std::array<cplx, 3> scale{cplx(std::max(1.0, std::abs(y[0]))),
                                          cplx(std::max(1.0, std::abs(y[1]))), cplx(1.0)};
                DP54<3>::step(rhs_star, rstar, y, hstep, y5, err, scale);
                if (err > tol && !(hstep < 1e-12)) {
                    h = std::max(hstep * std::max(0.2, 0.9 * std::pow(tol / err, 0.2)), 1e-12);
                    continue;
                }
                rstar += hstep;
                y = y5;
                if (!last) h = std::min(hstep * std::min(5.0, 0.9 * std::pow(tol / std::max(err, 1e-16), 0.2)), 1.0e2);
                if (hstep < 1e-13) throw std::runtime_error("integrate_mode: step underflow near r = " + std::to_string(y[2].real()));
            }
        };
        while (iout < output_r.size() && output_r[iout] <= r_switch * (1.0 + 1e-12)) {
            advance_to_r(output_r[iout]);
            double rq = y[2].real();
            record(rq, y[0], y[1] * varpi2(rq) / par.Delta(rq));
        }
        if (r_switch < r_range.second) advance_to_r(r_switch);
        r_cur = y[2].real();
        R = y[0];
        Rp = y[1] * varpi2(r_cur) / par.Delta(r_cur);
    }

    // phase 2: plain r out to r_range.second
    if (r_cur < r_range.second * (1.0 - 1e-13)) {
        std::array<cplx, 2> y{R, Rp};
        double x = r_cur, h = 1e-2;
        auto advance = [&](double x_target) {
            while (x < x_target * (1.0 - 1e-13)) {
                double hstep = std::min(h, x_target - x);
                std::array<cplx, 2> y5;
                double err;
                std::array<cplx, 2> scale{cplx(std::max(1.0, std::abs(y[0]))),
                                          cplx(std::max(1.0, std::abs(y[1])))};
                DP54<2>::step(rhs_r, x, y, hstep, y5, err, scale);
                if (err > tol && hstep > 1e-12) {
                    h = std::max(hstep * std::max(0.2, 0.9 * std::pow(tol / err, 0.2)), 1e-12);
                    continue;
                }
                x += hstep;
                y = y5;
                h = std::min(hstep * std::min(5.0, 0.9 * std::pow(tol / std::max(err, 1e-16), 0.2)),
                             10.0);
                if (hstep < 1e-13) throw std::runtime_error("integrate_mode: step underflow at r = " + std::to_string(x));
            }
        };
        while (iout < output_r.size() && output_r[iout] <= r_range.second * (1.0 + 1e-12)) {
            advance(output_r[iout]);
            record(x, y[0], y[1]);
        }
    }

    // spectral residual diagnostic: Chebyshev in the tortoise variable
    double diag_lo = std::max(r_start * 1.02, r_range.first);
    double diag_hi = r_range.second * 0.98;
    if (diag_hi > diag_lo * 1.05) {
        double r0d = default_r0(par, diag_lo);
        double xlo = tortoise_and_twist(par, diag_lo, r0d).r_star;
        double xhi = tortoise_and_twist(par, diag_hi, r0d).r_star;
        ChebGrid cg(xlo, xhi, 64);
        // re-integrate onto the diagnostic nodes (cheap relative to main solve)
        std::vector<double> nodes(cg.x.size());
        for (std::size_t i = 0; i < cg.x.size(); ++i) nodes[i] = r_of_rstar(par, cg.x[i], r0d);
        std::vector<cplx> vals(nodes.size());
        // light second pass
        {
            FrobeniusData fd2 = fd;
            std::array<cplx, 3> y{fd2.R, (par.Delta(r_start) / varpi2(r_start)) * fd2.dR,
                                  cplx(r_start)};
            double rstar = 0.0, h = 1e-3;
            std::size_t k = 0;
            auto advance_to_r = [&](double r_target) {
                while (y[2].real() < r_target * (1.0 - 1e-13)) {
                    double drstar = (tortoise_and_twist(par, r_target, y[2].real())).r_star;
                    double hstep = std::min(h, drstar);
                    std::array<cplx, 3> y5;
                    double err;
                    std::array<cplx, 3> scale{cplx(std::max(1.0, std::abs(y[0]))),
                                              cplx(std::max(1.0, std::abs(y[1]))), cplx(1.0)};
                    DP54<3>::step(rhs_star, rstar, y, hstep, y5, err, scale);
                    if (err > tol && hstep > 1e-12) {
                        h = std::max(hstep * std::max(0.2, 0.9 * std::pow(tol / err, 0.2)), 1e-12);
                        continue;
                    }
                    rstar += hstep;
                    y = y5;
                    h = std::min(hstep * std::min(5.0, 0.9 * std::pow(tol / std::max(err, 1e-16), 0.2)), 1.0e2);
                }
            };
            for (; k < nodes.size(); ++k) {
                advance_to_r(nodes[k]);
                vals[k] = y[0];
            }
        }
        sol.ode_residual = radial_residual_rstar(ode, cg, nodes, vals);
    }
    return sol;
}

double radial_residual_rstar(const RadialODE& ode, const ChebGrid& xg,
                             const std::vector<double>& rnodes,
                             const std::vector<cplx>& values) {
    // derivatives in the tortoise variable, chained to r
    auto dx1 = cheb_derivative(xg, values);
    auto dx2 = cheb_derivative(xg, dx1);
    const double a = ode.par.a;
    std::vector<cplx> d1(values.size()), d2(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        double r = rnodes[i];
        double f = (r * r + a * a) / ode.par.Delta(r);  // dx/dr
        double fp = (2.0 * r * ode.par.Delta(r) - (r * r + a * a) * (2.0 * r - 2.0 * ode.par.M)) /
                    (ode.par.Delta(r) * ode.par.Delta(r));
        fp = -fp;  // d/dr of (r^2+a^2)/Delta
        fp = (2.0 * r * ode.par.Delta(r) - (r * r + a * a) * (2.0 * r - 2.0 * ode.par.M)) /
             (ode.par.Delta(r) * ode.par.Delta(r));
        d1[i] = dx1[i] * f;
        d2[i] = dx2[i] * f * f + dx1[i] * fp;
    }
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        m0 = std::max(m0, std::abs(values[i]));
        m1 = std::max(m1, std::abs(d1[i]));
        m2 = std::max(m2, std::abs(d2[i]));
    }
    double worst = 0.0;
    for (std::size_t i = 4; i + 4 < values.size(); ++i) {
        cplx c0, c1, c2;
        ode.coeffs(cplx(rnodes[i]), c0, c1, c2);
        cplx res = c2 * d2[i] + c1 * d1[i] + c0 * values[i];
        double scale = (std::abs(c2) + std::abs(c1) + std::abs(c0)) * std::max({m0, m1, m2});
        if (scale > 0.0) worst = std::max(worst, std::abs(res) / scale);
    }
    return worst;
}

double radial_residual_cheb(const RadialODE& ode, const ChebGrid& g,
                            const std::vector<cplx>& values) {
    auto d1 = cheb_derivative(g, values);
    auto d2 = cheb_derivative(g, d1);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        m0 = std::max(m0, std::abs(values[i]));
        m1 = std::max(m1, std::abs(d1[i]));
        m2 = std::max(m2, std::abs(d2[i]));
    }
    double worst = 0.0;
    for (std::size_t i = 4; i + 4 < g.size(); ++i) {
        cplx c0, c1, c2;
        ode.coeffs(cplx(g.x[i]), c0, c1, c2);
        cplx res = c2 * d2[i] + c1 * d1[i] + c0 * values[i];
        // scale: operator magnitude times the solution scale, degenerate-safe
        double scale = (std::abs(c2) + std::abs(c1) + std::abs(c0)) * std::max({m0, m1, m2});
        if (scale > 0.0) worst = std::max(worst, std::abs(res) / scale);
    }
    return worst;
}

cplx wronskian(const RadialODE& ode, const RadialSolution& s1, const RadialSolution& s2, double r,
               double r_ref) {
    auto locate = [&](const RadialSolution& s) -> std::size_t {
        auto it = std::lower_bound(s.r.begin(), s.r.end(), r * (1.0 - 1e-12));
        if (it == s.r.end() || std::abs(*it - r) > 1e-9 * r)
            throw std::invalid_argument("wronskian: r not on the solution grid");
        return std::size_t(it - s.r.begin());
    };
    std::size_t i1 = locate(s1), i2 = locate(s2);
    cplx w = s1.value[i1] * s2.deriv[i2] - s1.deriv[i1] * s2.value[i2];
    // integrating factor exp(int c1/c2) by adaptive Simpson from r_ref to r
    std::function<cplx(double, double, cplx, cplx, cplx, int)> simp =
        [&](double x0, double x1, cplx f0, cplx fm, cplx f1, int depth) -> cplx {
        double xm = 0.5 * (x0 + x1);
        auto f = [&](double x) {
            cplx c0, c1, c2;
            ode.coeffs(cplx(x), c0, c1, c2);
            return c1 / c2;
        };
        cplx fl = f(0.5 * (x0 + xm)), fr = f(0.5 * (xm + x1));
        cplx whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        cplx left = (xm - x0) / 6.0 * (f0 + 4.0 * fl + fm);
        cplx right = (x1 - xm) / 6.0 * (fm + 4.0 * fr + f1);
        if (depth <= 0 || std::abs(left + right - whole) < 1e-12 * (1.0 + std::abs(whole)))
            return left + right + (left + right - whole) / 15.0;
        return simp(x0, xm, f0, fl, fm, depth - 1) + simp(xm, x1, fm, fr, f1, depth - 1);
    };
    auto f = [&](double x) {
        cplx c0, c1, c2;
        ode.coeffs(cplx(x), c0, c1, c2);
        return c1 / c2;
    };
    cplx I = simp(r_ref, r, f(r_ref), f(0.5 * (r_ref + r)), f(r), 18);
    return w * std::exp(I);
}

FluxReport mode_flux(const ModePair& f, const ModePair& h, const std::vector<double>& radii,
                     const ModePair* df, const ModePair* dh) {
    const auto& G = *f.phi_s.grid;
    if (h.phi_s.grid.get() != &G) throw std::invalid_argument("mode_flux: grid mismatch");
    const int s = f.mode.s;
    // radial derivative fields: caller-supplied (ODE-closed) or spectral
    auto dr_field = [&](const ModeField& u) {
        ModeField d = u;
        std::vector<cplx> col(G.nr());
        for (std::size_t jt = 0; jt < G.nt(); ++jt) {
            for (std::size_t ir = 0; ir < G.nr(); ++ir) col[ir] = u.at(ir, jt);
            auto dc = G.radial_derivative(col);
            for (std::size_t ir = 0; ir < G.nr(); ++ir) d.at(ir, jt) = dc[ir];
        }
        return d;
    };
    ModeField h_s_r = dh ? dh->phi_s : dr_field(h.phi_s);
    ModeField h_ms_r = dh ? dh->phibar_ms : dr_field(h.phibar_ms);
    ModeField f_s_r = df ? df->phi_s : dr_field(f.phi_s);
    ModeField f_ms_r = df ? df->phibar_ms : dr_field(f.phibar_ms);

    FluxReport rep;
    rep.radii = radii;
    for (double rq : radii) {
        // locate nearest Chebyshev node
        std::size_t ir = 0;
        double best = 1e300;
        for (std::size_t i = 0; i < G.nr(); ++i)
            if (std::abs(G.rnodes[i] - rq) < best) {
                best = std::abs(G.rnodes[i] - rq);
                ir = i;
            }
        ThetaFun integrand(-1, G.tgrid.n);
        for (std::size_t jt = 0; jt < G.nt(); ++jt) {
            const GeoPoint& gp = G.at(ir, jt);
            cplx Gr = gp.Gamma[1], Gbr = gp.Gammab[1];
            cplx fs = f.phi_s.at(ir, jt), fms = f.phibar_ms.at(ir, jt);
            cplx hs = h.phi_s.at(ir, jt), hms = h.phibar_ms.at(ir, jt);
            cplx Dh_ms = h_ms_r.at(ir, jt) - 2.0 * double(s) * Gbr * hms;
            cplx Dh_s = h_s_r.at(ir, jt) + 2.0 * double(s) * Gr * hs;
            cplx Df_s = f_s_r.at(ir, jt) + 2.0 * double(s) * Gr * fs;
            cplx Df_ms = f_ms_r.at(ir, jt) - 2.0 * double(s) * Gbr * fms;
            cplx Jr_low = std::conj(fs) * Dh_ms + std::conj(fms) * Dh_s - std::conj(Df_s) * hms -
                          std::conj(Df_ms) * hs;
            double grr = -gp.Delta / gp.rho2;
            double sinth = std::sin(gp.theta);
            integrand.v[jt] = grr * Jr_low * gp.rho2 * sinth;  // sqrt(-g) = rho^2 sin(th)
        }
        rep.flux.push_back(2.0 * M_PI * theta_integral(G.tgrid, integrand));
    }
    double mx = 0.0, scale = 0.0;
    for (auto v : rep.flux) scale = std::max(scale, std::abs(v));
    for (auto v : rep.flux) mx = std::max(mx, std::abs(v - rep.flux.front()));
    rep.max_rel_drift = (scale > 0.0) ? mx / scale : 0.0;
    return rep;
}

CurrentContractions mode_current_contraction(const ModePair& f, const ModePair& h, std::size_t ir,
                                             std::size_t jt) {
    const auto& G = *f.phi_s.grid;
    const int s = f.mode.s;
    const GeoPoint& gp = G.at(ir, jt);
    const cplx I(0.0, 1.0);
    // build the lowered current from contractions with l and n: need D_a h in all
    // coordinate directions: t, r, ph algebraic/mode, th spectral
    auto field_derivs = [&](const ModeField& u, std::size_t i, std::size_t j, cplx& ut, cplx& ur,
                            cplx& uth, cplx& uph) {
        std::vector<cplx> col(G.nr());
        for (std::size_t k = 0; k < G.nr(); ++k) col[k] = u.at(k, j);
        auto dc = G.radial_derivative(col);
        ur = dc[i];
        ThetaFun row(u.parity(), G.tgrid.n);
        for (std::size_t k = 0; k < G.nt(); ++k) row.v[k] = u.at(i, k);
        auto dt = theta_derivative(G.tgrid, row);
        uth = dt.v[j];
        ut = -I * u.omega * u.at(i, j);
        uph = I * double(u.m) * u.at(i, j);
    };
    auto current_low = [&](int aidx) {
        auto d4 = [&](const ModeField& u) {
            cplx ut, ur, uth, uph;
            field_derivs(u, ir, jt, ut, ur, uth, uph);
            std::array<cplx, 4> d{ut, ur, uth, uph};
            return d[std::size_t(aidx)];
        };
        cplx fs = f.phi_s.at(ir, jt), fms = f.phibar_ms.at(ir, jt);
        cplx hs = h.phi_s.at(ir, jt), hms = h.phibar_ms.at(ir, jt);
        cplx Ga = gp.Gamma[std::size_t(aidx)], Gab = gp.Gammab[std::size_t(aidx)];
        cplx Dh_ms = d4(h.phibar_ms) - 2.0 * double(s) * Gab * hms;
        cplx Dh_s = d4(h.phi_s) + 2.0 * double(s) * Ga * hs;
        cplx Df_s = d4(f.phi_s) + 2.0 * double(s) * Ga * fs;
        cplx Df_ms = d4(f.phibar_ms) - 2.0 * double(s) * Gab * fms;
        return std::conj(fs) * Dh_ms + std::conj(fms) * Dh_s - std::conj(Df_s) * hms -
               std::conj(Df_ms) * hs;
    };
    CurrentContractions out;
    out.lJ = 0.0;
    out.nJ = 0.0;
    for (int a = 0; a < 4; ++a) {
        cplx Ja = current_low(a);
        out.lJ += gp.l[std::size_t(a)] * Ja;
        out.nJ += gp.n[std::size_t(a)] * Ja;
    }
    return out;
}

CurrentContractions conformal_current_contraction(const ModePair& f, const ModePair& h,
                                                  std::size_t ir, std::size_t jt) {
    const auto& G = *f.phi_s.grid;
    const KerrParams& par = G.par;
    const int s = f.mode.s;
    const double r = G.rnodes[ir], th = G.tgrid.theta[jt];
    const double x = 1.0 / r;
    const double omega = f.phi_s.omega;
    const int m = f.phi_s.m;
    const cplx I(0.0, 1.0);
    if (!(x < 1.0 / (4.0 * par.M)))
        throw std::domain_error("conformal_current_contraction: needs r > 4M");

    ChartPoint cp{Chart::Conformal, {0.0, x, th, 0.0}};
    GeoPoint gp = geo_point(par, cp, Scaling::ConformalRescale);

    // breve fields: x^{-1} times the Kinnersley components, with the K*-phase
    // relative to the e^{-i w t* + i m ph*} mode convention of this chart
    double r0 = default_r0(par, r);
    auto tt = tortoise_and_twist(par, r, r0);
    cplx phase = std::exp(I * (omega * tt.r_star - double(m) * tt.twist));
    cplx dphase_dr = I * (omega * (r * r + par.a * par.a) - double(m) * par.a) / par.Delta(r) * phase;

    auto breve_value_and_derivs = [&](const ModeField& u, cplx& val, std::array<cplx, 4>& d) {
        std::vector<cplx> col(G.nr());
        for (std::size_t k = 0; k < G.nr(); ++k) col[k] = u.at(k, jt);
        auto dc = G.radial_derivative(col);
        cplx W = u.at(ir, jt), Wr = dc[ir];
        ThetaFun row(u.parity(), G.tgrid.n);
        for (std::size_t k = 0; k < G.nt(); ++k) row.v[k] = u.at(ir, k);
        auto dth = theta_derivative(G.tgrid, row);
        // breve profile in the conformal chart: Wb = r * phase(r) * W(r,th)
        val = phase * W * r;
        cplx dWb_dr = dphase_dr * W * r + phase * Wr * r + phase * W;
        d[0] = -I * omega * val;      // d/dt*
        d[1] = -r * r * dWb_dr;       // d/dx = -r^2 d/dr
        d[2] = phase * dth.v[jt] * r; // d/dth at fixed x
        d[3] = I * double(m) * val;   // d/dph*
    };

    auto current_low = [&](int aidx) {
        cplx fs, fms, hs, hms;
        std::array<cplx, 4> dfs, dfms, dhs, dhms;
        breve_value_and_derivs(f.phi_s, fs, dfs);
        breve_value_and_derivs(f.phibar_ms, fms, dfms);
        breve_value_and_derivs(h.phi_s, hs, dhs);
        breve_value_and_derivs(h.phibar_ms, hms, dhms);
        cplx Ga = gp.Gamma[std::size_t(aidx)], Gab = gp.Gammab[std::size_t(aidx)];
        cplx Dh_ms = dhms[std::size_t(aidx)] - 2.0 * double(s) * Gab * hms;
        cplx Dh_s = dhs[std::size_t(aidx)] + 2.0 * double(s) * Ga * hs;
        cplx Df_s = dfs[std::size_t(aidx)] + 2.0 * double(s) * Ga * fs;
        cplx Df_ms = dfms[std::size_t(aidx)] - 2.0 * double(s) * Gab * fms;
        return std::conj(fs) * Dh_ms + std::conj(fms) * Dh_s - std::conj(Df_s) * hms -
               std::conj(Df_ms) * hs;
    };
    CurrentContractions out;
    out.lJ = 0.0;
    out.nJ = 0.0;
    for (int a = 0; a < 4; ++a) {
        cplx Ja = current_low(a);
        out.lJ += gp.l[std::size_t(a)] * Ja;
        out.nJ += gp.n[std::size_t(a)] * Ja;
    }
    return out;
}

void export_solution_csv(const RadialSolution& sol, const std::string& path) {
    std::ofstream os(path);
    os << "r,re_R,im_R,re_dR,im_dR\n";
    os.precision(16);
    for (std::size_t i = 0; i < sol.r.size(); ++i)
        os << sol.r[i] << ',' << sol.value[i].real() << ',' << sol.value[i].imag() << ','
           << sol.deriv[i].real() << ',' << sol.deriv[i].imag() << '\n';
}

}  // namespace ktk
