#pragma once

#include <ostream>

#include "permcycles/count_table.hpp"
#include "permcycles/exact_counts.hpp"

namespace permcycles {

/// CSV with header "m,nu_exact_num,nu_exact_den" for exact tables, "m,nu_double" (17 significant
/// digits) for log-double tables, rows m = 0..n_max.
void write_table_csv(std::ostream& out, const CycleLengthTable& table);

/// CSV with header "c_1,...,c_d,probability"; exact masses are written as
/// "num/den".
void write_pmf_csv(std::ostream& out, const ExactPmf& pmf);
void write_pmf_csv(std::ostream& out, const DoublePmf& pmf);

}  // namespace permcycles
