#include "gme/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gme {

namespace {

void check_axes(const BipartiteWavefunction& psi) {
    if (psi.axis_A.n < 2 || psi.axis_B.n < 2)
        throw std::invalid_argument("grid: need at least 2 points per axis");
    if (!(psi.axis_A.step > 0.0) || !(psi.axis_B.step > 0.0))
        throw std::invalid_argument("grid: spacings must be strictly positive");
    if (psi.amplitudes.rows() != psi.axis_A.n || psi.amplitudes.cols() != psi.axis_B.n)
        throw std::invalid_argument("grid: amplitude shape does not match axes");
}

}  // namespace

Axis make_axis(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("make_axis: bad range");
    return Axis{lo, (hi - lo) / n, n};
}

double BipartiteWavefunction::squared_norm() const {
    // Kahan summation, fixed row-major order.
    double sum = 0.0, comp = 0.0;
    for (int i = 0; i < amplitudes.rows(); ++i) {
        for (int j = 0; j < amplitudes.cols(); ++j) {
            const double term = std::norm(amplitudes(i, j)) - comp;
            const double t = sum + term;
            comp = (t - sum) - term;
            sum = t;
        }
    }
    return sum * axis_A.step * axis_B.step;
}

BipartiteWavefunction normalize(const BipartiteWavefunction& psi) {
    check_axes(psi);
    const double n2 = psi.squared_norm();
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw std::domain_error("normalize: zero or non-finite norm");
    BipartiteWavefunction out = psi;
    out.amplitudes /= std::sqrt(n2);
    return out;
}

double fidelity(const BipartiteWavefunction& a, const BipartiteWavefunction& b) {
    check_axes(a);
    check_axes(b);
    if (!(a.axis_A == b.axis_A) || !(a.axis_B == b.axis_B))
        throw std::invalid_argument("fidelity: grid mismatch");
    std::complex<double> sum = 0.0;
    for (int i = 0; i < a.amplitudes.rows(); ++i)
        for (int j = 0; j < a.amplitudes.cols(); ++j)
            sum += std::conj(a.amplitudes(i, j)) * b.amplitudes(i, j);
    return std::abs(sum) * a.axis_A.step * a.axis_B.step;
}

namespace {

constexpr char kMagic[8] = {'G', 'M', 'E', 'G', 'R', 'I', 'D', '1'};

void write_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_i64(std::ostream& out, std::int64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
double read_f64(std::istream& in) {
    double v;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
std::int64_t read_i64(std::istream& in) {
    std::int64_t v;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void save_grid_state(const BipartiteWavefunction& psi, std::ostream& out) {
    check_axes(psi);
    out.write(kMagic, sizeof kMagic);
    write_i64(out, psi.axis_A.n);
    write_i64(out, psi.axis_B.n);
    write_f64(out, psi.axis_A.min);
    write_f64(out, psi.axis_A.step);
    write_f64(out, psi.axis_B.min);
    write_f64(out, psi.axis_B.step);
    write_f64(out, psi.norm_tolerance);
    for (int i = 0; i < psi.axis_A.n; ++i) {
        for (int j = 0; j < psi.axis_B.n; ++j) {
            write_f64(out, psi.amplitudes(i, j).real());
            write_f64(out, psi.amplitudes(i, j).imag());
        }
    }
    if (!out) throw std::runtime_error("save_grid_state: write failed");
}

BipartiteWavefunction load_grid_state(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("load_grid_state: bad magic");
    BipartiteWavefunction psi;
    psi.axis_A.n = static_cast<int>(read_i64(in));
    psi.axis_B.n = static_cast<int>(read_i64(in));
    psi.axis_A.min = read_f64(in);
    psi.axis_A.step = read_f64(in);
    psi.axis_B.min = read_f64(in);
    psi.axis_B.step = read_f64(in);
    psi.norm_tolerance = read_f64(in);
    if (!in || psi.axis_A.n < 2 || psi.axis_B.n < 2)
        throw std::runtime_error("load_grid_state: corrupt header");
    psi.amplitudes.resize(psi.axis_A.n, psi.axis_B.n);
    for (int i = 0; i < psi.axis_A.n; ++i) {
        for (int j = 0; j < psi.axis_B.n; ++j) {
            const double re = read_f64(in);
            const double im = read_f64(in);
            psi.amplitudes(i, j) = {re, im};
        }
    }
    if (!in) throw std::runtime_error("load_grid_state: truncated payload");
    return psi;
}

void save_grid_state_file(const BipartiteWavefunction& psi, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save_grid_state(psi, out);
}

BipartiteWavefunction load_grid_state_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return load_grid_state(in);
}

void save_grid_state_csv(const BipartiteWavefunction& psi, std::ostream& out) {
    check_axes(psi);
    out << "# bipartite grid state, midpoint axes: yA = minA + (iA+0.5)*stepA\n";
    out << "iA,iB,yA,yB,re,im\n";
    std::ostringstream line;
    line.precision(17);
    for (int i = 0; i < psi.axis_A.n; ++i) {
        for (int j = 0; j < psi.axis_B.n; ++j) {
            line.str({});
            line << i << ',' << j << ',' << psi.axis_A.point(i) << ','
                 << psi.axis_B.point(j) << ',' << psi.amplitudes(i, j).real()
                 << ',' << psi.amplitudes(i, j).imag() << '\n';
            out << line.str();
        }
    }
}

}  // namespace gme
