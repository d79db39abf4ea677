// Benchmark of the data-parallel sweep kernels against their serial reference.
#include <chrono>
#include <iostream>
#include <random>

#include "kerrteuk/parallel.hpp"
#include "kerrteuk/tetrad.hpp"
#include "kerrteuk/angular.hpp"
#include "kerrteuk/unruh.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
void run_case(const char* name, std::size_t n, F&& body) {
    using ktk::ExecPolicy;
    std::vector<double> out_serial(n), out_par(n);
    auto t0 = Clock::now();
    ktk::parallel_for(n, [&](std::size_t i) { out_serial[i] = body(i); }, ExecPolicy::Serial);
    double ts = seconds_since(t0);
    t0 = Clock::now();
    ktk::parallel_for(n, [&](std::size_t i) { out_par[i] = body(i); }, ExecPolicy::Parallel);
    double tp = seconds_since(t0);
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(out_serial[i] - out_par[i]));
    std::cout << name << ": serial " << ts << " s, parallel " << tp << " s, speedup "
              << ts / tp << ", max dev " << dev << "\n";
}

}  // namespace

int main() {
    std::cout << "threads available: " << ktk::hardware_threads() << "\n";
    ktk::KerrParams par(1.0, 0.6);

    // Gamma-identity grid sweep
    {
        const int N = 48;
        run_case("gamma-identity sweep", std::size_t(N) * N, [&](std::size_t k) {
            int i = int(k) / N, j = int(k) % N;
            double r = par.r_plus() + 0.2 + (10.0 - par.r_plus() - 0.2) * i / (N - 1.0);
            double th = 0.15 + (M_PI - 0.3) * j / (N - 1.0);
            ktk::ChartPoint p{ktk::Chart::BL, {0.0, r, th, 0.0}};
            auto G = ktk::geo_point(par, p, ktk::Scaling::Kinnersley);
            ktk::cplx lG = 0.0;
            for (int a_ = 0; a_ < 4; ++a_) lG += G.l[a_] * G.Gamma[a_];
            double rho2 = r * r + par.a * par.a * std::cos(th) * std::cos(th);
            return std::abs(lG - ktk::cplx(r, par.a * std::cos(th)) / rho2);
        });
    }
    // spheroidal eigen-solve batch
    {
        std::vector<std::tuple<int, int, double>> jobs;
        for (int s : {1, 2})
            for (int m = -2; m <= 2; ++m)
                for (double c : {0.0, 0.1, 0.3, 0.5}) jobs.push_back({s, m, c});
        run_case("spheroidal batch", jobs.size(), [&](std::size_t k) {
            auto [s, m, c] = jobs[k];
            auto modes = ktk::spheroidal_solve(s, m, c, 8, 128);
            return modes.front().lambda_bar;
        });
    }
    // horizon kernel battery
    {
        ktk::BoundaryGrid1D ugrid{-40.0, 50.0 / 511.0, 512};
        run_case("horizon kernel battery", 32, [&](std::size_t k) {
            std::mt19937_64 rng(1234 + k);
            auto d = ktk::random_horizon_data(par, 1, ugrid, 5, rng);
            return ktk::w_horizon(d, d, +1).value.real();
        });
    }
    return 0;
}
