#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "pcsf/rational.hpp"

namespace pcsf::cli {

/// One CSV row; absent fields are written as empty cells.
struct PlotRow {
  std::optional<long> n;
  std::optional<int> k;
  std::optional<int> l;
  std::optional<Rational> bound;
  std::optional<Rational> alpha_star;
  std::optional<Rational> beta_star;
  std::optional<Rational> ratio;
};

/// Header `n,k,l,bound,alpha_star,beta_star,ratio`, then one line per row.
/// Rationals are exact "a/b" strings. Throws Error when the file cannot be
/// written.
void export_plot_data(const std::vector<PlotRow>& rows, const std::filesystem::path& path);

}  // namespace pcsf::cli
