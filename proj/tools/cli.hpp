#ifndef TVGAP_CLI_HPP
#define TVGAP_CLI_HPP

#include "tvgap/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tvgap::cli {

enum ExitCode { kOk = 0, kUsage = 1, kAssertion = 2, kNonConvergence = 3 };

struct Grid {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    double at(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
};

/// "0+1.2i", "1.2i", "-0.5-1e-3i", "2"
cplx parse_complex(const std::string& s);
/// "start:stop:count"
Grid parse_grid(const std::string& s);
/// "a+bi" with round-trip precision
std::string format_complex(cplx z);
/// RFC-4180 field quoting
std::string csv_field(const std::string& s);

/// Runs one subcommand; returns the exit code. Payloads go to `out` (or the
/// --out file), diagnostics as JSON to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tvgap::cli

#endif
