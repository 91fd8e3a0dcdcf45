#include "plot_data.hpp"

#include <fstream>

#include "pcsf/error.hpp"

namespace pcsf::cli {

namespace {

template <class T>
void cell(std::ostream& out, const std::optional<T>& v) {
  if (v) out << *v;
}

void cell(std::ostream& out, const std::optional<Rational>& v) {
  if (v) out << to_string(*v);
}

}  // namespace

void export_plot_data(const std::vector<PlotRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "n,k,l,bound,alpha_star,beta_star,ratio\n";
  for (const auto& r : rows) {
    cell(out, r.n);
    out << ',';
    cell(out, r.k);
    out << ',';
    cell(out, r.l);
    out << ',';
    cell(out, r.bound);
    out << ',';
    cell(out, r.alpha_star);
    out << ',';
    cell(out, r.beta_star);
    out << ',';
    cell(out, r.ratio);
    out << '\n';
  }
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace pcsf::cli
