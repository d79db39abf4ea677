// Per-module verification suites: every check evaluates one identity or bound
// from the implemented formulas against an independent route and reports a
// residual against its tolerance.
#pragma once

#include <string>
#include <vector>

#include "kerrteuk/config.hpp"

namespace ktk {

struct CheckRow {
    std::string id;
    std::string eq_tag;  // source equation label
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
    double seconds = 0.0;
};

std::vector<CheckRow> run_suite_geometry(const RunConfig& cfg);
std::vector<CheckRow> run_suite_tetrad(const RunConfig& cfg, bool inject_gamma_sign_bug = false);
std::vector<CheckRow> run_suite_angular(const RunConfig& cfg);
std::vector<CheckRow> run_suite_radial(const RunConfig& cfg);
std::vector<CheckRow> run_suite_tsid(const RunConfig& cfg);
std::vector<CheckRow> run_suite_unruh(const RunConfig& cfg);
std::vector<CheckRow> run_suite(const RunConfig& cfg, const std::string& which);

void write_report_json(const std::string& path, const std::vector<CheckRow>& rows);
void write_report_csv(const std::string& path, const std::vector<CheckRow>& rows);
int suite_exit_code(const std::vector<CheckRow>& rows);

}  // namespace ktk
