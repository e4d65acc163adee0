#pragma once

#include <memory>
#include <string>
#include <vector>

#include "levytc/errors.hpp"
#include "levytc/tce.hpp"
#include "levytc/vec.hpp"

namespace ltc {

/// Tiny total expression grammar for user-authored scalar functions:
/// +, -, *, /, min, max, abs, pow, sqrt, numeric constants, and the declared
/// variables. No user code execution; errors name the offending position.
class Expr {
public:
    /// variables: allowed names in order; evaluation binds them positionally.
    static Expr parse(const std::string& text, const std::vector<std::string>& variables);

    double eval(const std::vector<double>& variable_values) const;

    const std::string& text() const { return text_; }

    struct Node;  // exposed for the parser implementation

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

struct GParseOptions {
    double probe_lo = -5.0;
    double probe_hi = 5.0;
    int probe_points = 2001;
    double growth_exponent = 1.0;  // declared lambda attached to the result
};

/// Build a GFunction from an expression in x (x1..xd in d > 1): validates
/// nonnegativity on the probe grid, estimates the bound, and locates zeros
/// by probe-grid minimisation with local bisection refinement.
GFunction parse_g(const std::string& text, int dim = 1, const GParseOptions& options = {});

}  // namespace ltc
