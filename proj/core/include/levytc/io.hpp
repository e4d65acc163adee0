#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levytc/simulate.hpp"
#include "levytc/tce.hpp"
#include "levytc/verify.hpp"

namespace ltc {

/// Shortest round-trip decimal representation (locale-independent).
std::string format_double(double v);

/// FNV-1a 64-bit over raw bytes; used for run-manifest checksums.
std::uint64_t fnv1a64(const std::string& bytes);
std::string checksum_file(const std::string& path);  // hex digest

/// Ensemble dump: header `path_id,t,x_1..x_d`, one row per grid point.
std::string ensemble_csv(const Ensemble& ensemble);

/// Parse an ensemble dump back (exercises the lossless round trip).
Ensemble ensemble_from_csv(const std::string& csv);

/// TCE solution dump: `path_id,t,alpha1,alpha2,z_1..z_d,unique`.
std::string tce_csv(const std::vector<TceSolution>& solutions, int dim);

/// Verification rows: `test,params,estimate_re,estimate_im,stderr,pass`.
struct VerifyRow {
    std::string test;
    std::string params;
    Complex estimate{0.0, 0.0};
    double stderr_ = 0.0;
    bool pass = false;
};
std::string verify_csv(const std::vector<VerifyRow>& rows);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace ltc
