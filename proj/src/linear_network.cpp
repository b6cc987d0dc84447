#include "gbsval/linear_network.hpp"

#include "gbsval/rng.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gbsval {

SqueezerBank::SqueezerBank(Eigen::VectorXd r_in, double eps)
    : r(std::move(r_in)), epsilon(eps) {
    if (r.size() < 1) throw std::invalid_argument("SqueezerBank: need at least one mode");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("SqueezerBank: epsilon must lie in [0,1]");
    for (int j = 0; j < r.size(); ++j)
        if (!(r[j] >= 0.0))
            throw std::invalid_argument("SqueezerBank: squeezing parameters must be >= 0");
}

SqueezerBank SqueezerBank::uniform(int n_modes, double r_value, double eps) {
    return SqueezerBank(Eigen::VectorXd::Constant(n_modes, r_value), eps);
}

SqueezerBank SqueezerBank::load(const std::string& path, double eps) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("SqueezerBank: cannot open " + path);
    std::vector<double> vals;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream iss(line);
        double v;
        if (!(iss >> v))
            throw std::runtime_error("SqueezerBank: bad value at " + path + ":" +
                                     std::to_string(lineno));
        vals.push_back(v);
    }
    if (vals.empty()) throw std::runtime_error("SqueezerBank: empty file " + path);
    Eigen::VectorXd r(vals.size());
    for (std::size_t j = 0; j < vals.size(); ++j) r[static_cast<int>(j)] = vals[j];
    return SqueezerBank(std::move(r), eps);
}

void SqueezerBank::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("SqueezerBank: cannot write " + path);
    out.precision(17);
    for (int j = 0; j < r.size(); ++j) out << r[j] << "\n";
}

bool SqueezerBank::classical() const {
    for (int j = 0; j < r.size(); ++j)
        if (var_y(j) < 0.0) return false;
    return true;
}

TransmissionMatrix haar_unitary(int n_modes, std::uint64_t seed) {
    if (n_modes < 1) throw std::invalid_argument("haar_unitary: need n_modes >= 1");
    Rng rng(seed, 0x4861617255ULL);
    Eigen::MatrixXcd g(n_modes, n_modes);
    for (int i = 0; i < n_modes; ++i)
        for (int j = 0; j < n_modes; ++j)
            g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n_modes, n_modes);
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix phases so the draw is Haar rather than QR-convention dependent
    for (int j = 0; j < n_modes; ++j) {
        std::complex<double> d = r(j, j);
        double a = std::abs(d);
        std::complex<double> phase = (a > 0.0) ? d / a : std::complex<double>(1.0, 0.0);
        q.col(j) *= phase;
    }
    return TransmissionMatrix{std::move(q), 1.0};
}

TransmissionMatrix apply_uniform_loss(const TransmissionMatrix& u, double t_amp) {
    if (!(t_amp >= 0.0 && t_amp <= 1.0))
        throw std::invalid_argument("apply_uniform_loss: t_amp must lie in [0,1]");
    return TransmissionMatrix{t_amp * u.T, u.t_correction};
}

PhysicalityCheck validate_physicality(const TransmissionMatrix& t, double tolerance) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t.effective());
    PhysicalityCheck check;
    const auto& sv = svd.singularValues();
    check.singular_values.assign(sv.data(), sv.data() + sv.size());
    check.physical = true;
    std::ostringstream msg;
    for (double s : check.singular_values) {
        if (s > 1.0 + tolerance) {
            check.physical = false;
            msg << "singular value " << s << " exceeds 1; ";
        }
    }
    check.diagnostic = check.physical ? "physical" : msg.str();
    return check;
}

TransmissionMatrix TransmissionMatrix::load(const std::string& path, double t_corr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("TransmissionMatrix: cannot open " + path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("M=", 0) != 0)
        throw std::runtime_error("TransmissionMatrix: missing M=<int> header in " + path);
    int m = std::stoi(header.substr(2));
    if (m < 1) throw std::runtime_error("TransmissionMatrix: bad mode count in " + path);
    Eigen::MatrixXcd t(m, m);
    std::string line;
    for (int i = 0; i < m; ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error("TransmissionMatrix: truncated file " + path);
        std::istringstream iss(line);
        for (int j = 0; j < m; ++j) {
            std::string tok;
            if (!(iss >> tok))
                throw std::runtime_error("TransmissionMatrix: short row " +
                                         std::to_string(i + 2) + " in " + path);
            auto comma = tok.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error("TransmissionMatrix: entry not re,im at row " +
                                         std::to_string(i + 2) + " in " + path);
            t(i, j) = std::complex<double>(std::stod(tok.substr(0, comma)),
                                           std::stod(tok.substr(comma + 1)));
        }
    }
    return TransmissionMatrix{std::move(t), t_corr};
}

void TransmissionMatrix::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("TransmissionMatrix: cannot write " + path);
    out.precision(17);
    out << "M=" << modes() << "\n";
    for (int i = 0; i < modes(); ++i) {
        for (int j = 0; j < modes(); ++j) {
            if (j) out << ' ';
            out << T(i, j).real() << ',' << T(i, j).imag();
        }
        out << "\n";
    }
}

} // namespace gbsval
