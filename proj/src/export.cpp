#include "permcycles/export.hpp"

#include <iomanip>

namespace permcycles {

namespace {

void write_header(std::ostream& out, std::size_t d) {
  for (std::size_t k = 1; k <= d; ++k) out << "c_" << k << ',';
  out << "probability\n";
}

void write_counts(std::ostream& out, const CountsVector& c) {
  for (auto x : c.counts) out << x << ',';
}

}  // namespace

void write_table_csv(std::ostream& out, const CycleLengthTable& table) {
  if (table.is_exact()) {
    out << "m,nu_exact_num,nu_exact_den\n";
    for (std::size_t m = 0; m <= table.n_max(); ++m) {
      const Rational& v = table.exact(m);
      out << m << ',' << numerator(v) << ',' << denominator(v) << '\n';
    }
    return;
  }
  out << "m,nu_double\n" << std::setprecision(17);
  for (std::size_t m = 0; m <= table.n_max(); ++m) out << m << ',' << table.value(m) << '\n';
}

void write_pmf_csv(std::ostream& out, const ExactPmf& pmf) {
  write_header(out, pmf.d);
  for (const auto& [c, p] : pmf.entries) {
    write_counts(out, c);
    out << to_string(p) << '\n';
  }
}

void write_pmf_csv(std::ostream& out, const DoublePmf& pmf) {
  write_header(out, pmf.d);
  const auto old = out.precision(17);
  for (const auto& [c, p] : pmf.entries) {
    write_counts(out, c);
    out << p << '\n';
  }
  out.precision(old);
}

}  // namespace permcycles
