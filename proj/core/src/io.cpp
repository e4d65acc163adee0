#include "levytc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "levytc/errors.hpp"

namespace ltc {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string checksum_file(const std::string& path) {
    std::ostringstream os;
    os << std::hex << fnv1a64(read_file(path));
    return os.str();
}

std::string ensemble_csv(const Ensemble& ensemble) {
    const int d = ensemble.start.dim;
    std::ostringstream os;
    os << "path_id,t";
    for (int i = 1; i <= d; ++i) os << ",x_" << i;
    os << "\n";
    for (std::size_t p = 0; p < ensemble.paths.size(); ++p) {
        const SamplePath& path = ensemble.paths[p];
        for (std::size_t k = 0; k < path.times.size(); ++k) {
            os << p << "," << format_double(path.times[k]);
            for (int i = 0; i < d; ++i) os << "," << format_double(path.values[k][i]);
            os << "\n";
        }
    }
    return os.str();
}

Ensemble ensemble_from_csv(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line)) throw ParseError("ensemble_from_csv: empty input");
    int d = 0;
    {
        std::stringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) {
            if (col.rfind("x_", 0) == 0) ++d;
        }
        if (d < 1) throw ParseError("ensemble_from_csv: no x_ columns in header");
    }
    Ensemble e;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string tok;
        std::getline(ls, tok, ',');
        std::size_t pid = std::stoul(tok);
        std::getline(ls, tok, ',');
        double t = std::stod(tok);
        Vec v = Vec::zero(d);
        for (int i = 0; i < d; ++i) {
            if (!std::getline(ls, tok, ',')) throw ParseError("ensemble_from_csv: short row");
            v[i] = std::stod(tok);
        }
        while (e.paths.size() <= pid) e.paths.emplace_back();
        e.paths[pid].times.push_back(t);
        e.paths[pid].values.push_back(v);
    }
    if (!e.paths.empty() && !e.paths[0].values.empty()) e.start = e.paths[0].values[0];
    return e;
}

std::string tce_csv(const std::vector<TceSolution>& solutions, int dim) {
    std::ostringstream os;
    os << "path_id,t,alpha1,alpha2";
    for (int i = 1; i <= dim; ++i) os << ",z_" << i;
    os << ",unique\n";
    for (std::size_t p = 0; p < solutions.size(); ++p) {
        const TceSolution& s = solutions[p];
        for (std::size_t k = 0; k < s.z.times.size(); ++k) {
            os << p << "," << format_double(s.z.times[k]) << "," << format_double(s.alpha1[k])
               << "," << format_double(s.alpha2[k]);
            for (int i = 0; i < dim; ++i) os << "," << format_double(s.z.values[k][i]);
            os << "," << (s.unique ? 1 : 0) << "\n";
        }
    }
    return os.str();
}

std::string verify_csv(const std::vector<VerifyRow>& rows) {
    std::ostringstream os;
    os << "test,params,estimate_re,estimate_im,stderr,pass\n";
    for (const VerifyRow& r : rows) {
        os << r.test << "," << r.params << "," << format_double(r.estimate.real()) << ","
           << format_double(r.estimate.imag()) << "," << format_double(r.stderr_) << ","
           << (r.pass ? 1 : 0) << "\n";
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open for writing: " + path);
    f << contents;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open for reading: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace ltc
