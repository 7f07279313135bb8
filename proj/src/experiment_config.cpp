#include "wavesynth/experiment_config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "wavesynth/error.hpp"
#include "wavesynth/special_functions.hpp"

namespace wavesynth {

namespace {

using nlohmann::json;

constexpr double kMaxKappa = 160.0;

int ceil_int(double v) { return static_cast<int>(std::ceil(v - 1e-9)); }

double get_double(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(key, std::string(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key, std::string(key) + " must be finite");
    return d;
}

int get_int(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_number_integer()) {
        const auto i = v.get<long long>();
        if (i < -1'000'000'000LL || i > 1'000'000'000LL) throw ConfigError(key, std::string(key) + " out of range");
        return static_cast<int>(i);
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    throw ConfigError(key, std::string(key) + " must be an integer");
}

template <class T, class Get>
std::vector<T> get_list(const json& j, const char* key, Get get) {
    const auto& v = j.at(key);
    std::vector<T> out;
    if (!v.is_array()) {
        out.push_back(get(j, key));
        return out;
    }
    if (v.empty()) throw ConfigError(key, std::string(key) + " must not be empty");
    for (const auto& e : v) {
        json wrap;
        wrap[key] = e;
        out.push_back(get(wrap, key));
    }
    return out;
}

std::string get_string(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_string()) throw ConfigError(key, std::string(key) + " must be a string");
    return v.get<std::string>();
}

bool get_bool(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(key, std::string(key) + " must be true or false");
    return v.get<bool>();
}

struct Reader {
    const json& in;
    std::set<std::string> consumed;

    bool has(const char* key) {
        if (!in.contains(key)) return false;
        consumed.insert(key);
        return true;
    }
};

void require(bool ok, const char* key, const std::string& msg) {
    if (!ok) throw ConfigError(key, msg);
}

std::vector<int> scaled(double kappa, std::initializer_list<double> factors) {
    std::vector<int> out;
    for (double f : factors) out.push_back(ceil_int(f * kappa));
    return out;
}

void validate_Ms(const std::vector<int>& Ms, const char* key) {
    for (int m : Ms) require(m >= 1 && m <= 20000, key, std::string(key) + " entries must lie in [1, 20000]");
}

void validate_P(int P, const char* key) {
    require(P >= 0 && P <= special::kMaxBesselOrder, key,
            std::string(key) + " must lie in [0, " + std::to_string(special::kMaxBesselOrder) + "]");
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"density",       "sample",    "tau-table", "ppw-instability",
                                                   "epw-stability", "surrogate", "quasi-opt", "triangle"};
    return names;
}

int ExperimentConfig::samples_for(int m) const {
    if (S > 0) return S;
    return ceil_int(oversampling * m);
}

bool ExperimentConfig::randomized() const {
    if (experiment == "surrogate") return true;
    return std::find(strategies.begin(), strategies.end(), SamplingStrategy::Random) != strategies.end();
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["experiment"] = experiment;
    auto put_strategies = [&] {
        json a = json::array();
        for (auto s : strategies) a.push_back(std::string(to_string(s)));
        j["strategies"] = a;
        j["seed"] = seed;
    };
    auto put_solver = [&] {
        j["kappa"] = kappa;
        j["eps"] = eps;
        j["oversampling"] = oversampling;
        j["S"] = S;
    };
    if (experiment == "density") {
        j["kappa"] = kappa;
        j["P"] = P;
    } else if (experiment == "sample") {
        j["kappa"] = kappa;
        j["P"] = P;
        j["M"] = M;
        put_strategies();
    } else if (experiment == "tau-table") {
        j["kappas"] = kappas;
        j["p_factor"] = p_factor;
    } else if (experiment == "ppw-instability") {
        put_solver();
        j["Ms"] = Ms;
        j["p_min"] = p_min;
        j["p_max"] = p_max;
    } else if (experiment == "epw-stability") {
        put_solver();
        put_strategies();
        j["P"] = P;
        j["Ms"] = Ms;
        j["p_min"] = p_min;
        j["p_max"] = p_max;
    } else if (experiment == "surrogate") {
        put_solver();
        put_strategies();
        j["Ps"] = Ps;
        j["ratios"] = ratios;
        j["bulk"] = bulk;
    } else if (experiment == "quasi-opt") {
        put_solver();
        put_strategies();
        j["Ps"] = Ps;
        j["sigma"] = sigma;
        j["max_factor"] = max_factor;
        j["resolution"] = resolution;
    } else if (experiment == "triangle") {
        put_solver();
        put_strategies();
        j["Ms"] = Ms;
        j["sources"] = sources;
        j["kinds"] = kinds;
        j["bulk"] = bulk;
    }
    return j.dump(2) + "\n";
}

ExperimentConfig resolve_config(std::string_view experiment, std::string_view json_text) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end()) {
        throw ConfigError("experiment", "unknown experiment '" + std::string(experiment) + "'");
    }
    json in;
    if (!json_text.empty()) {
        try {
            in = json::parse(json_text);
        } catch (const json::parse_error& e) {
            throw ConfigError("config", std::string("malformed JSON configuration: ") + e.what());
        }
    }
    if (in.is_null()) in = json::object();
    if (!in.is_object()) throw ConfigError("config", "configuration must be a JSON object");

    Reader r{in, {}};
    ExperimentConfig c;
    c.experiment = std::string(experiment);
    if (r.has("experiment")) {
        require(get_string(in, "experiment") == experiment, "experiment",
                "configuration is for experiment '" + get_string(in, "experiment") + "', not '" +
                    std::string(experiment) + "'");
    }

    const std::string& e = c.experiment;
    const bool uses_solver = e != "density" && e != "sample" && e != "tau-table";
    const bool uses_strategy = e != "density" && e != "tau-table" && e != "ppw-instability";

    if (e == "tau-table") {
        if (r.has("kappas")) c.kappas = get_list<double>(in, "kappas", get_double);
        else if (r.has("kappa")) {
            c.kappas = {get_double(in, "kappa")};
            require(c.kappas[0] > 0.0 && c.kappas[0] <= kMaxKappa, "kappa", "kappa must lie in (0, 160]");
        }
        else c.kappas = {4.0, 16.0, 64.0};
        c.p_factor = r.has("p_factor") ? get_double(in, "p_factor") : 16.0;
        require(c.p_factor > 0.0, "p_factor", "p_factor must be positive");
        for (double k : c.kappas) {
            require(k > 0.0 && k <= kMaxKappa, "kappas", "kappas entries must lie in (0, 160]");
            require(std::ceil(c.p_factor * k) <= special::kMaxBesselOrder, "p_factor",
                    "p_factor * kappa exceeds the supported order " + std::to_string(special::kMaxBesselOrder));
        }
    } else {
        if (r.has("kappa")) c.kappa = get_double(in, "kappa");
        require(c.kappa > 0.0 && c.kappa <= kMaxKappa, "kappa",
                "kappa must lie in (0, 160], got " + std::to_string(c.kappa));
    }
    const double k = c.kappa;

    if (uses_solver) {
        if (r.has("eps")) c.eps = get_double(in, "eps");
        require(c.eps > 0.0 && c.eps <= 1.0, "eps", "eps must lie in (0, 1]");
        if (r.has("oversampling")) c.oversampling = get_double(in, "oversampling");
        require(c.oversampling >= 1.0 && c.oversampling <= 64.0, "oversampling", "oversampling must lie in [1, 64]");
        if (r.has("S")) c.S = get_int(in, "S");
        require(c.S >= 0, "S", "S must be non-negative (0 selects oversampling * M)");
    }

    if (uses_strategy) {
        if (r.has("strategies")) {
            c.strategies = get_list<SamplingStrategy>(
                in, "strategies", [](const json& j, const char* key) { return parse_strategy(get_string(j, key)); });
        } else if (r.has("strategy")) {
            c.strategies = get_list<SamplingStrategy>(
                in, "strategy", [](const json& j, const char* key) { return parse_strategy(get_string(j, key)); });
        } else {
            c.strategies = {SamplingStrategy::Sobol};
        }
        if (r.has("seed")) {
            const auto& v = in.at("seed");
            require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0), "seed",
                    "seed must be a non-negative integer");
            c.seed = v.get<std::uint64_t>();
        }
    }

    auto read_Ms = [&](std::vector<int> dflt) {
        if (r.has("Ms")) c.Ms = get_list<int>(in, "Ms", get_int);
        else if (r.has("M")) c.Ms = {get_int(in, "M")};
        else c.Ms = std::move(dflt);
        validate_Ms(c.Ms, "Ms");
    };
    auto read_Ps = [&](std::vector<int> dflt) {
        if (r.has("Ps")) c.Ps = get_list<int>(in, "Ps", get_int);
        else if (r.has("P")) c.Ps = {get_int(in, "P")};
        else c.Ps = std::move(dflt);
        for (int p : c.Ps) validate_P(p, "Ps");
    };
    auto read_p_range = [&](int lo, int hi) {
        c.p_min = r.has("p_min") ? get_int(in, "p_min") : lo;
        c.p_max = r.has("p_max") ? get_int(in, "p_max") : hi;
        require(std::abs(c.p_min) <= special::kMaxBesselOrder, "p_min", "|p_min| exceeds the supported order");
        require(std::abs(c.p_max) <= special::kMaxBesselOrder, "p_max", "|p_max| exceeds the supported order");
        require(c.p_min <= c.p_max, "p_min", "p_min must not exceed p_max");
    };

    if (e == "density" || e == "sample" || e == "epw-stability") {
        c.P = r.has("P") ? get_int(in, "P") : ceil_int(4.0 * k);
        validate_P(c.P, "P");
    }
    if (e == "sample") {
        c.M = r.has("M") ? get_int(in, "M") : 4 * (2 * c.P + 1);
        require(c.M >= 1 && c.M <= 10'000'000, "M", "M must lie in [1, 1e7]");
        require(c.strategies.size() == 1, "strategies", "sample takes exactly one strategy");
    }
    if (e == "ppw-instability") {
        read_Ms(scaled(k, {4, 8, 16, 32}));
        read_p_range(0, ceil_int(6.0 * k));
    }
    if (e == "epw-stability") {
        read_Ms(scaled(k, {4, 8, 16, 32}));
        read_p_range(-c.P, c.P);
    }
    if (e == "surrogate") {
        read_Ps(scaled(k, {1, 2, 3, 4}));
        c.ratios = r.has("ratios") ? get_list<double>(in, "ratios", get_double)
                                   : std::vector<double>{1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0};
        for (double q : c.ratios) require(q > 0.0 && q <= 64.0, "ratios", "ratios entries must lie in (0, 64]");
        c.bulk = r.has("bulk") ? get_bool(in, "bulk") : false;
    }
    if (e == "quasi-opt") {
        read_Ps(scaled(k, {1, 2, 3, 4}));
        c.sigma = r.has("sigma") ? get_double(in, "sigma") : 1e-12;
        require(c.sigma > 0.0 && c.sigma < 1.0, "sigma", "sigma must lie in (0, 1)");
        c.max_factor = r.has("max_factor") ? get_double(in, "max_factor") : 64.0;
        require(c.max_factor >= 1.0 && c.max_factor <= 64.0, "max_factor", "max_factor must lie in [1, 64]");
        c.resolution = r.has("resolution") ? get_double(in, "resolution") : 0.05;
        require(c.resolution > 0.0 && c.resolution <= 1.0, "resolution", "resolution must lie in (0, 1]");
    }
    if (e == "triangle") {
        std::vector<int> dflt;
        for (int m = 20; m <= 600; m += 20) dflt.push_back(m);
        read_Ms(std::move(dflt));
        c.sources = r.has("sources") ? get_list<std::string>(in, "sources", get_string)
                                     : std::vector<std::string>{"edge", "vertex"};
        for (const auto& s : c.sources) {
            require(s == "edge" || s == "vertex", "sources", "sources entries must be 'edge' or 'vertex'");
        }
        c.kinds = r.has("kinds") ? get_list<std::string>(in, "kinds", get_string)
                                 : std::vector<std::string>{"ppw", "epw"};
        for (const auto& s : c.kinds) require(s == "ppw" || s == "epw", "kinds", "kinds entries must be 'ppw' or 'epw'");
        c.bulk = r.has("bulk") ? get_bool(in, "bulk") : false;
    }
    if (uses_solver && c.S > 0) {
        int biggest = 0;
        for (int m : c.Ms) biggest = std::max(biggest, m);
        require(c.S >= biggest, "S", "S must be at least M (" + std::to_string(biggest) + ")");
        if (!c.Ps.empty()) {
            require(false, "S", "S cannot be fixed for sweeps whose M is derived from P; use oversampling");
        }
    }

    for (const auto& [key, _] : in.items()) {
        if (!r.consumed.count(key)) {
            throw ConfigError(key, "parameter '" + key + "' is not used by experiment '" + e + "'");
        }
    }
    return c;
}

} // namespace wavesynth
