#include "yspde/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "yspde/csv.hpp"

namespace yspde {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Parser {
    int line_no = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
    }

    double num(const std::string& v) const {
        try {
            std::size_t pos = 0;
            double d = std::stod(v, &pos);
            if (pos != v.size()) fail("trailing characters in number '" + v + "'");
            return d;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            fail("expected a number, got '" + v + "'");
        }
    }

    int integer(const std::string& v) const {
        double d = num(v);
        int i = static_cast<int>(d);
        if (static_cast<double>(i) != d) fail("expected an integer, got '" + v + "'");
        return i;
    }

    std::uint64_t u64(const std::string& v) const {
        try {
            std::size_t pos = 0;
            std::uint64_t x = std::stoull(v, &pos);
            if (pos != v.size()) fail("trailing characters in seed '" + v + "'");
            return x;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            fail("expected an unsigned integer, got '" + v + "'");
        }
    }

    bool boolean(const std::string& v) const {
        if (v == "true") return true;
        if (v == "false") return false;
        fail("expected true or false, got '" + v + "'");
    }

    std::vector<double> num_list(const std::string& v) const {
        std::vector<double> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(num(trim(item)));
        if (out.empty()) fail("expected a comma-separated list, got '" + v + "'");
        return out;
    }

    std::vector<int> int_list(const std::string& v) const {
        std::vector<int> out;
        for (double d : num_list(v)) {
            int i = static_cast<int>(d);
            if (static_cast<double>(i) != d) fail("expected integers in list '" + v + "'");
            out.push_back(i);
        }
        return out;
    }

    CoefficientDescriptor descriptor(const std::string& v) const {
        CoefficientDescriptor d;
        std::size_t colon = v.find(':');
        if (colon == std::string::npos) {
            d.id = v;
        } else {
            d.id = v.substr(0, colon);
            d.params = num_list(v.substr(colon + 1));
        }
        if (d.id.empty()) fail("empty coefficient descriptor");
        return d;
    }
};

std::string descriptor_str(const CoefficientDescriptor& d) {
    if (d.params.empty()) return d.id;
    std::string s = d.id + ":";
    for (std::size_t i = 0; i < d.params.size(); ++i)
        s += (i ? "," : "") + fmt17(d.params[i]);
    return s;
}

template <typename T>
std::string list_str(const std::vector<T>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        if constexpr (std::is_same_v<T, double>)
            s += fmt17(xs[i]);
        else
            s += std::to_string(xs[i]);
    }
    return s;
}

}  // namespace

void RunConfig::validate() const {
    problem.validate();
    if (grid.base_intervals < 1) throw ConfigError("grid base_intervals must be >= 1");
    if (grid.level < 0 || grid.level > 30) throw ConfigError("grid level must lie in [0, 30]");
    if (driver.kind == "fbm") {
        if (!(driver.hurst > 0.5 && driver.hurst < 1.0))
            throw ConfigError("Hurst parameter must lie in (1/2, 1)");
    } else if (driver.kind != "bm" && driver.kind.rfind("deterministic:", 0) != 0) {
        throw ConfigError("driver kind must be fbm, bm or deterministic:<formula>");
    }
    if (solver.picard_tol <= 0.0) throw ConfigError("picard_tol must be positive");
    if (solver.max_iter < 1) throw ConfigError("max_iter must be >= 1");
    if (solver.max_halvings < 0) throw ConfigError("max_halvings must be >= 0");
    if (solver.refine < 0 || solver.refine > 12)
        throw ConfigError("solver refine must lie in [0, 12]");
    if (solver.window_len < 0.0) throw ConfigError("window_len must be >= 0 (0 selects T/8)");
    if (sewing.tol <= 0.0) throw ConfigError("sewing tol must be positive");
    if (sewing.refine_levels < 0 || sewing.refine_levels > 12)
        throw ConfigError("sewing refine_levels must lie in [0, 12]");
    if (run.threads < 0) throw ConfigError("threads must be >= 0 (0 = auto)");
    if (run.members < 1) throw ConfigError("members must be >= 1");
    if (output.window < 0) throw ConfigError("output window must be >= 0");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    Parser p;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    while (std::getline(is, raw)) {
        ++p.line_no;
        std::string line = trim(raw);
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') p.fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "problem" && section != "grid" && section != "driver" &&
                section != "solver" && section != "sewing" && section != "output" &&
                section != "run" && section != "experiment")
                p.fail("unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) p.fail("expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) p.fail("empty key");
        if (val.empty()) p.fail("empty value for key '" + key + "'");
        if (section.empty()) p.fail("key '" + key + "' appears before any [section]");

        if (section == "problem") {
            auto& pr = cfg.problem;
            if (key == "T") pr.T = p.num(val);
            else if (key == "n") pr.n = p.integer(val);
            else if (key == "l") pr.l = p.integer(val);
            else if (key == "e") pr.e = p.integer(val);
            else if (key == "d") pr.d = p.integer(val);
            else if (key == "K") pr.K = p.integer(val);
            else if (key == "alpha") pr.alpha = p.num(val);
            else if (key == "beta") pr.beta = p.num(val);
            else if (key == "gamma") pr.gamma = p.num(val);
            else if (key == "lambda") pr.lambda = p.num(val);
            else if (key == "mu") pr.mu = p.num(val);
            else if (key == "nu") pr.nu = p.num(val);
            else if (key == "m") pr.m = p.num(val);
            else if (key == "mass_shift") pr.mass_shift = p.num(val);
            else if (key == "continuous_mode") pr.continuous_mode = p.boolean(val);
            else if (key == "xi") pr.xi = p.descriptor(val);
            else if (key == "f") pr.f = p.descriptor(val);
            else if (key == "G1") pr.G1 = p.descriptor(val);
            else if (key == "G0") pr.G0 = p.descriptor(val);
            else if (key == "g") pr.g = p.descriptor(val);
            else if (key == "h") pr.h = p.descriptor(val);
            else p.fail("unknown key '" + key + "' in [problem]");
        } else if (section == "grid") {
            if (key == "base_intervals") cfg.grid.base_intervals = p.integer(val);
            else if (key == "level") cfg.grid.level = p.integer(val);
            else p.fail("unknown key '" + key + "' in [grid]");
        } else if (section == "driver") {
            if (key == "kind") cfg.driver.kind = val;
            else if (key == "hurst") cfg.driver.hurst = p.num(val);
            else if (key == "params") cfg.driver.params = p.num_list(val);
            else if (key == "cholesky_cap") cfg.driver.cholesky_cap = p.integer(val);
            else if (key == "circulant") cfg.driver.circulant = p.boolean(val);
            else p.fail("unknown key '" + key + "' in [driver]");
        } else if (section == "solver") {
            if (key == "window_len") cfg.solver.window_len = p.num(val);
            else if (key == "picard_tol") cfg.solver.picard_tol = p.num(val);
            else if (key == "max_iter") cfg.solver.max_iter = p.integer(val);
            else if (key == "max_halvings") cfg.solver.max_halvings = p.integer(val);
            else if (key == "refine") cfg.solver.refine = p.integer(val);
            else p.fail("unknown key '" + key + "' in [solver]");
        } else if (section == "sewing") {
            if (key == "tol") cfg.sewing.tol = p.num(val);
            else if (key == "refine_levels") cfg.sewing.refine_levels = p.integer(val);
            else p.fail("unknown key '" + key + "' in [sewing]");
        } else if (section == "output") {
            if (key == "dir") cfg.output.dir = val;
            else if (key == "gamma_list") cfg.output.gamma_list = p.num_list(val);
            else if (key == "modes") cfg.output.modes = p.int_list(val);
            else if (key == "window") cfg.output.window = p.integer(val);
            else p.fail("unknown key '" + key + "' in [output]");
        } else if (section == "run") {
            if (key == "seed") cfg.run.seed = p.u64(val);
            else if (key == "threads") cfg.run.threads = p.integer(val);
            else if (key == "members") cfg.run.members = p.integer(val);
            else p.fail("unknown key '" + key + "' in [run]");
        } else if (section == "experiment") {
            auto& ex = cfg.experiment;
            if (key == "id") ex.id = val;
            else if (key == "rho_list") ex.rho_list = p.num_list(val);
            else if (key == "theta_list") ex.theta_list = p.num_list(val);
            else if (key == "t_list") ex.t_list = p.num_list(val);
            else if (key == "trials") ex.trials = p.integer(val);
            else if (key == "members") ex.members = p.integer(val);
            else if (key == "beta") ex.beta = p.num(val);
            else if (key == "theta") ex.theta = p.num(val);
            else if (key == "m") ex.m = p.num(val);
            else if (key == "level_lo") ex.level_lo = p.integer(val);
            else if (key == "level_hi") ex.level_hi = p.integer(val);
            else if (key == "oracle") ex.oracle = val;
            else if (key == "required_slope") ex.required_slope = p.num(val);
            else p.fail("unknown key '" + key + "' in [experiment]");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string RunConfig::emit() const {
    std::ostringstream os;
    os << "[problem]\n";
    os << "T = " << fmt17(problem.T) << "\n";
    os << "n = " << problem.n << "\n";
    os << "l = " << problem.l << "\n";
    os << "e = " << problem.e << "\n";
    os << "d = " << problem.d << "\n";
    os << "K = " << problem.K << "\n";
    os << "alpha = " << fmt17(problem.alpha) << "\n";
    os << "beta = " << fmt17(problem.beta) << "\n";
    os << "gamma = " << fmt17(problem.gamma) << "\n";
    os << "lambda = " << fmt17(problem.lambda) << "\n";
    os << "mu = " << fmt17(problem.mu) << "\n";
    os << "nu = " << fmt17(problem.nu) << "\n";
    os << "m = " << fmt17(problem.m) << "\n";
    os << "mass_shift = " << fmt17(problem.mass_shift) << "\n";
    os << "continuous_mode = " << (problem.continuous_mode ? "true" : "false") << "\n";
    os << "xi = " << descriptor_str(problem.xi) << "\n";
    os << "f = " << descriptor_str(problem.f) << "\n";
    os << "G1 = " << descriptor_str(problem.G1) << "\n";
    os << "G0 = " << descriptor_str(problem.G0) << "\n";
    os << "g = " << descriptor_str(problem.g) << "\n";
    os << "h = " << descriptor_str(problem.h) << "\n";
    os << "\n[grid]\n";
    os << "base_intervals = " << grid.base_intervals << "\n";
    os << "level = " << grid.level << "\n";
    os << "\n[driver]\n";
    os << "kind = " << driver.kind << "\n";
    os << "hurst = " << fmt17(driver.hurst) << "\n";
    if (!driver.params.empty()) os << "params = " << list_str(driver.params) << "\n";
    os << "cholesky_cap = " << driver.cholesky_cap << "\n";
    os << "circulant = " << (driver.circulant ? "true" : "false") << "\n";
    os << "\n[solver]\n";
    os << "window_len = " << fmt17(solver.window_len) << "\n";
    os << "picard_tol = " << fmt17(solver.picard_tol) << "\n";
    os << "max_iter = " << solver.max_iter << "\n";
    os << "max_halvings = " << solver.max_halvings << "\n";
    os << "refine = " << solver.refine << "\n";
    os << "\n[sewing]\n";
    os << "tol = " << fmt17(sewing.tol) << "\n";
    os << "refine_levels = " << sewing.refine_levels << "\n";
    os << "\n[output]\n";
    os << "dir = " << output.dir << "\n";
    os << "gamma_list = " << list_str(output.gamma_list) << "\n";
    os << "modes = " << list_str(output.modes) << "\n";
    os << "window = " << output.window << "\n";
    os << "\n[run]\n";
    os << "seed = " << run.seed << "\n";
    os << "threads = " << run.threads << "\n";
    os << "members = " << run.members << "\n";
    os << "\n[experiment]\n";
    os << "id = " << experiment.id << "\n";
    os << "rho_list = " << list_str(experiment.rho_list) << "\n";
    os << "theta_list = " << list_str(experiment.theta_list) << "\n";
    os << "t_list = " << list_str(experiment.t_list) << "\n";
    os << "trials = " << experiment.trials << "\n";
    os << "members = " << experiment.members << "\n";
    os << "beta = " << fmt17(experiment.beta) << "\n";
    os << "theta = " << fmt17(experiment.theta) << "\n";
    os << "m = " << fmt17(experiment.m) << "\n";
    os << "level_lo = " << experiment.level_lo << "\n";
    os << "level_hi = " << experiment.level_hi << "\n";
    os << "oracle = " << experiment.oracle << "\n";
    os << "required_slope = " << fmt17(experiment.required_slope) << "\n";
    return os.str();
}

}  // namespace yspde
