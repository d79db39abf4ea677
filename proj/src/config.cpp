#include "kerrteuk/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ktk {

namespace {

template <typename T>
T parse_scalar(const std::string& s) {
    std::istringstream is(s);
    T v;
    if (!(is >> v)) throw std::invalid_argument("config: cannot parse '" + s + "'");
    return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(parse_scalar<T>(tok));
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& json_path, const std::map<std::string, std::string>& flags) {
    RunConfig cfg;
    double M = cfg.params.M, a = cfg.params.a;
    if (!json_path.empty()) {
        std::ifstream is(json_path);
        if (!is) throw std::invalid_argument("config: cannot open " + json_path);
        nlohmann::json j;
        try {
            is >> j;
        } catch (const std::exception& e) {
            throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
        }
        auto get = [&](const char* key, auto& target) {
            if (!j.contains(key)) return;
            try {
                target = j.at(key).get<std::decay_t<decltype(target)>>();
            } catch (const std::exception&) {
                throw std::invalid_argument(std::string("config: bad value for field '") + key + "'");
            }
        };
        get("M", M);
        get("a", a);
        get("spins", cfg.spins);
        get("omegas", cfg.omegas);
        get("ms", cfg.ms);
        get("lmax", cfg.lmax);
        get("tol", cfg.tol);
        get("outdir", cfg.outdir);
        get("format", cfg.format);
        get("seed", cfg.seed);
        get("parallel", cfg.parallel);
    }
    auto flag = [&](const char* key) -> const std::string* {
        auto it = flags.find(key);
        return it == flags.end() ? nullptr : &it->second;
    };
    if (auto v = flag("M")) M = parse_scalar<double>(*v);
    if (auto v = flag("a")) a = parse_scalar<double>(*v);
    if (auto v = flag("spins")) cfg.spins = parse_list<int>(*v);
    if (auto v = flag("omegas")) cfg.omegas = parse_list<double>(*v);
    if (auto v = flag("ms")) cfg.ms = parse_list<int>(*v);
    if (auto v = flag("lmax")) cfg.lmax = parse_scalar<int>(*v);
    if (auto v = flag("tol")) cfg.tol = parse_scalar<double>(*v);
    if (auto v = flag("outdir")) cfg.outdir = *v;
    if (auto v = flag("format")) cfg.format = *v;
    if (auto v = flag("seed")) cfg.seed = parse_scalar<std::uint64_t>(*v);
    if (auto v = flag("serial")) cfg.parallel = !(*v == "1" || *v == "true");

    if (!(cfg.tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
    if (cfg.spins.empty() || cfg.omegas.empty() || cfg.ms.empty())
        throw std::invalid_argument("config: grids must be nonempty");
    if (cfg.format != "json" && cfg.format != "csv")
        throw std::invalid_argument("config: format must be json or csv");
    cfg.params = KerrParams(M, a);  // throws on extremality
    return cfg;
}

}  // namespace ktk
