#include "dosnet/dos.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dosnet/errors.hpp"
#include "dosnet/format.hpp"

namespace dosnet {

DosGrid::DosGrid(double lo, double hi, int n_bins) : q_lo(lo), q_hi(hi) {
  if (n_bins < 1 || !(hi > lo)) throw std::invalid_argument("DOS grid needs n_bins >= 1 and q_hi > q_lo");
  log_g = Eigen::VectorXd::Zero(n_bins);
  hist = HistVector::Zero(n_bins);
  active = ActiveMask::Constant(n_bins, false);
}

int DosGrid::bin_of(double q) const {
  constexpr double kSnap = 1e-7;
  const double pos = (q - q_lo) / width() + kSnap;
  if (!(pos >= 0.0)) return -1;
  const auto bin = static_cast<long long>(std::floor(pos));
  if (bin >= n_bins()) {
    // q_hi itself and values snapped onto it belong to the last bin
    return q <= q_hi + kSnap * width() ? n_bins() - 1 : -1;
  }
  return static_cast<int>(bin);
}

bool DosGrid::same_binning(const DosGrid& other) const {
  return n_bins() == other.n_bins() && q_lo == other.q_lo && q_hi == other.q_hi;
}

double log_sum_exp(const Eigen::VectorXd& x, const ActiveMask& mask) {
  double peak = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (mask(i)) peak = std::max(peak, x(i));
  if (!std::isfinite(peak)) return peak;
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (mask(i)) total += std::exp(x(i) - peak);
  return peak + std::log(total);
}

DosGrid normalize(DosGrid grid) {
  if (grid.n_active() == 0) throw std::invalid_argument("cannot normalize a DOS with no active bins");
  const double shift = log_sum_exp(grid.log_g, grid.active);
  for (int i = 0; i < grid.n_bins(); ++i)
    grid.log_g(i) = grid.active(i) ? grid.log_g(i) - shift : -std::numeric_limits<double>::infinity();
  return grid;
}

std::vector<RatioRow> compare(const DosGrid& a, const DosGrid& b) {
  if (!a.same_binning(b)) throw std::invalid_argument("DOS grids use different binning");
  if (!(a.active && b.active).any()) throw std::invalid_argument("DOS grids share no active bins");
  const DosGrid na = normalize(a);
  const DosGrid nb = normalize(b);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<RatioRow> rows;
  for (int i = 0; i < a.n_bins(); ++i) {
    if (na.active(i) && nb.active(i)) {
      rows.push_back({a.bin_lo(i), a.bin_hi(i), na.log_g(i) - nb.log_g(i), Evidence::Both});
    } else if (na.active(i)) {
      rows.push_back({a.bin_lo(i), a.bin_hi(i), kInf, Evidence::OnlyA});
    } else if (nb.active(i)) {
      rows.push_back({a.bin_lo(i), a.bin_hi(i), -kInf, Evidence::OnlyB});
    }
  }
  return rows;
}

std::string evidence_name(Evidence e) {
  switch (e) {
    case Evidence::Both: return "both";
    case Evidence::OnlyA: return "a_only";
    case Evidence::OnlyB: return "b_only";
  }
  return "both";
}

void write_dos_csv(std::ostream& out, const DosGrid& grid) {
  out << "q_lo,q_hi,log_g_norm,hist,active\n";
  for (int i = 0; i < grid.n_bins(); ++i) {
    out << format_double(grid.bin_lo(i)) << ',' << format_double(grid.bin_hi(i)) << ','
        << format_double(grid.active(i) ? grid.log_g(i) : -std::numeric_limits<double>::infinity())
        << ',' << grid.hist(i) << ',' << (grid.active(i) ? 1 : 0) << '\n';
  }
}

DosGrid read_dos_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("q_lo,q_hi,log_g_norm,hist,active", 0) != 0)
    throw InputError("DOS CSV: missing header", 1);
  struct Row {
    double lo, hi, log_g;
    std::int64_t hist;
    bool active;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw InputError("DOS CSV: expected 5 columns", line_no);
    try {
      rows.push_back({parse_double(cells[0]), parse_double(cells[1]), parse_double(cells[2]),
                      std::stoll(cells[3]), cells[4] == "1"});
    } catch (const std::exception&) {
      throw InputError("DOS CSV: bad number", line_no);
    }
  }
  if (rows.empty()) throw InputError("DOS CSV: no rows");
  DosGrid grid(rows.front().lo, rows.back().hi, static_cast<int>(rows.size()));
  for (int i = 0; i < grid.n_bins(); ++i) {
    grid.active(i) = rows[i].active;
    grid.hist(i) = rows[i].hist;
    grid.log_g(i) = rows[i].log_g;
  }
  return grid;
}

DosGrid read_dos_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open DOS file '" + path + "'");
  try {
    return read_dos_csv(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_ratio_csv(std::ostream& out, const std::vector<RatioRow>& rows) {
  out << "q_lo,q_hi,log_ratio,flag\n";
  for (const auto& r : rows) {
    out << format_double(r.q_lo) << ',' << format_double(r.q_hi) << ',' << format_double(r.log_ratio)
        << ',' << evidence_name(r.flag) << '\n';
  }
}

}  // namespace dosnet
