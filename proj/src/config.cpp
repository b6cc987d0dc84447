#include "gbsval/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gbsval {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    in >> out;
    if (in.fail() || !(in >> std::ws).eof())
        throw ConfigError("config: bad value for " + key + ": '" + value + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::istringstream in(value);
    std::string tok;
    while (std::getline(in, tok, ','))
        out.push_back(parse_number<int>(key, trim(tok)));
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

} // namespace

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig RunConfig::parse_text(const std::string& text) {
    RunConfig cfg;
    cfg.hash = fnv1a_hex(text);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool matrix_set = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hashpos = line.find('#');
        if (hashpos != std::string::npos) line.erase(hashpos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty value for " + key);

        if (key == "modes" || key == "inputs") cfg.modes = parse_number<int>(key, value);
        else if (key == "r") cfg.r = parse_number<double>(key, value);
        else if (key == "r_file") cfg.r_file = value;
        else if (key == "epsilon") cfg.epsilon = parse_number<double>(key, value);
        else if (key == "t_correction") cfg.t_correction = parse_number<double>(key, value);
        else if (key == "matrix") { cfg.matrix = value; matrix_set = true; }
        else if (key == "matrix_file") cfg.matrix_file = value;
        else if (key == "haar_seed") cfg.haar_seed = parse_number<std::uint64_t>(key, value);
        else if (key == "loss_t") cfg.loss_t = parse_number<double>(key, value);
        else if (key == "samples_per_trajectory")
            cfg.plan.samples_per_trajectory = parse_number<std::int64_t>(key, value);
        else if (key == "trajectories")
            cfg.plan.trajectories = parse_number<std::int64_t>(key, value);
        else if (key == "seed") cfg.plan.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "dimension") cfg.dimension = parse_number<int>(key, value);
        else if (key == "window_min") cfg.window_min = parse_int_list(key, value);
        else if (key == "window_max") cfg.window_max = parse_int_list(key, value);
        else if (key == "auto_window_threshold")
            cfg.auto_window_threshold = parse_number<double>(key, value);
        else if (key == "dataset") cfg.dataset = value;
        else if (key == "model") cfg.model = value;
        else if (key == "m_cut") cfg.m_cut = parse_number<int>(key, value);
        else if (key == "theory") cfg.theory = value;
        else if (key == "c_max") cfg.c_max = parse_number<int>(key, value);
        else if (key == "tail_policy") cfg.tail_policy = value;
        else if (key == "fake_seed") cfg.fake_seed = parse_number<std::uint64_t>(key, value);
        else if (key == "fit") cfg.fit = (value == "true" || value == "1");
        else if (key == "ground_truth") cfg.ground_truth = value;
        else
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
    }

    if (!matrix_set && !cfg.matrix_file.empty()) cfg.matrix = "file";
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

void RunConfig::validate() const {
    if (r_file.empty() && modes < 1)
        throw ConfigError("config: modes must be >= 1 (or give r_file)");
    if (!r_file.empty() && r != 0.0)
        throw ConfigError("config: give either r or r_file, not both");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw ConfigError("config: epsilon must lie in [0, 1]");
    if (!(t_correction > 0.0 && t_correction <= 1.0))
        throw ConfigError("config: t_correction must lie in (0, 1]");
    if (matrix != "haar" && matrix != "file")
        throw ConfigError("config: matrix must be 'haar' or 'file'");
    if (matrix == "file" && matrix_file.empty())
        throw ConfigError("config: matrix=file needs matrix_file");
    if (matrix == "haar" && !matrix_file.empty())
        throw ConfigError("config: exactly one matrix source; drop matrix_file "
                          "or set matrix=file");
    if (!(loss_t >= 0.0 && loss_t <= 1.0))
        throw ConfigError("config: loss_t must lie in [0, 1]");
    if (plan.samples_per_trajectory < 1 || plan.trajectories < 1)
        throw ConfigError("config: ensemble plan dimensions must be >= 1");
    if (dimension < 1) throw ConfigError("config: dimension must be >= 1");
    if (window_min.size() != window_max.size())
        throw ConfigError("config: window_min and window_max lengths differ");
    if (!window_min.empty() && static_cast<int>(window_min.size()) != dimension)
        throw ConfigError("config: windows must give one entry per axis");
    for (std::size_t i = 0; i < window_min.size(); ++i)
        if (window_min[i] < 0 || window_max[i] < window_min[i])
            throw ConfigError("config: need 0 <= window_min <= window_max");
    if (!(auto_window_threshold > 0.0))
        throw ConfigError("config: auto_window_threshold must be > 0");
    if (c_max < 1) throw ConfigError("config: c_max must be >= 1");
    if (tail_policy != "renormalize" && tail_policy != "clamp")
        throw ConfigError("config: tail_policy must be 'renormalize' or 'clamp'");
    if (ground_truth != "ideal" && ground_truth != "nonideal")
        throw ConfigError("config: ground_truth must be 'ideal' or 'nonideal'");
    if (theory != "simulation" && theory != "exact")
        throw ConfigError("config: theory must be 'simulation' or 'exact'");
    if (model != "lossy-squeezed" && model != "lossless-squeezed" &&
        model != "poisson-pair-limit" && model != "thermal-negative-binomial")
        throw ConfigError("config: unknown model '" + model + "'");
}

SqueezerBank RunConfig::make_bank() const {
    const double eps = (ground_truth == "ideal") ? 0.0 : epsilon;
    if (!r_file.empty()) {
        SqueezerBank bank = SqueezerBank::load(r_file, eps);
        if (modes > 0 && bank.modes() != modes)
            throw ConfigError("config: r_file holds " + std::to_string(bank.modes()) +
                              " modes, expected " + std::to_string(modes));
        return bank;
    }
    return SqueezerBank::uniform(modes, r, eps);
}

TransmissionMatrix RunConfig::make_network() const {
    const double t = (ground_truth == "ideal") ? 1.0 : t_correction;
    TransmissionMatrix net;
    if (matrix == "file") {
        net = TransmissionMatrix::load(matrix_file, t);
    } else {
        net = haar_unitary(modes, haar_seed);
        if (loss_t < 1.0) net = apply_uniform_loss(net, loss_t);
        net.t_correction = t;
    }
    if (modes > 0 && net.modes() != modes)
        throw ConfigError("config: matrix has " + std::to_string(net.modes()) +
                          " modes, expected " + std::to_string(modes));
    return net;
}

BinningSpec RunConfig::make_subsets() const {
    const int m = !r_file.empty() ? make_bank().modes() : modes;
    BinningSpec spec = BinningSpec::contiguous_split(m, dimension);
    if (windows_explicit()) {
        spec.m_min = window_min;
        spec.m_max = window_max;
    }
    return spec;
}

} // namespace gbsval
