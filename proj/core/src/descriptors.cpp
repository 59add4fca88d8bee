#include "clsgen/descriptors.hpp"

#include <cmath>
#include <map>

#include "clsgen/errors.hpp"

namespace clsgen::analysis {

namespace {

int alpha_index(char c) {
  size_t p = corpus::kAlphabet.find(c);
  if (p == std::string_view::npos) throw DataError(std::string("descriptors: not a residue: ") + c);
  return static_cast<int>(p);
}

// Eisenberg consensus scale, order A C D E F G H I K L M N P Q R S T V W Y.
constexpr std::array<double, 20> kEisenberg = {0.62,  0.29, -0.90, -0.74, 1.19, 0.48, -0.40, 1.38, -1.50, 1.06,
                                               0.64,  -0.78, 0.12, -0.85, -2.53, -0.18, -0.05, 1.08, 0.81, 0.26};

// Kyte-Doolittle hydropathy.
constexpr std::array<double, 20> kKyteDoolittle = {1.8, 2.5, -3.5, -3.5, 2.8, -0.4, -3.2, 4.5, -3.9, 3.8,
                                                   1.9, -3.5, -1.6, -3.5, -4.5, -0.8, -0.7, 4.2, -0.9, -1.3};

// Average residue masses (Da); water added once per chain.
constexpr std::array<double, 20> kResidueMass = {71.0788,  103.1388, 115.0886, 129.1155, 147.1766,
                                                 57.0519,  137.1411, 113.1594, 128.1741, 113.1594,
                                                 131.1926, 114.1038, 97.1167,  128.1307, 156.1875,
                                                 87.0782,  101.1051, 99.1326,  186.2132, 163.1760};
constexpr double kWaterMass = 18.0153;
constexpr double kAmidationDelta = -0.9847;  // -OH +NH2

// pKa set: N-term 9.0, C-term 3.55, D 4.05, E 4.25, C 9.0, Y 10.07,
// K 10.0, R 12.0, H 6.0.
constexpr double kPkaNTerm = 9.0;
constexpr double kPkaCTerm = 3.55;

double pka_positive(char r) {
  switch (r) {
    case 'K': return 10.0;
    case 'R': return 12.0;
    case 'H': return 6.0;
    default: return 0.0;
  }
}

double pka_negative(char r) {
  switch (r) {
    case 'D': return 4.05;
    case 'E': return 4.25;
    case 'C': return 9.0;
    case 'Y': return 10.07;
    default: return 0.0;
  }
}

double positive_fraction(double pka, double ph) { return 1.0 / (1.0 + std::pow(10.0, ph - pka)); }
double negative_fraction(double pka, double ph) { return -1.0 / (1.0 + std::pow(10.0, pka - ph)); }

// Guruprasad dipeptide instability weights. diwv[left][right], alphabetical
// residue order on both axes.
const std::array<std::array<double, 20>, 20>& diwv_table() {
  static const std::array<std::array<double, 20>, 20> table = [] {
    std::array<std::array<double, 20>, 20> t{};
    for (auto& row : t) row.fill(1.0);
    auto set = [&t](char a, char b, double v) { t[static_cast<size_t>(alpha_index(a))][static_cast<size_t>(alpha_index(b))] = v; };
    // A
    set('A', 'C', 44.94); set('A', 'D', -7.49); set('A', 'H', -7.49); set('A', 'P', 20.26);
    // C
    set('C', 'D', 20.26); set('C', 'H', 33.60); set('C', 'L', 20.26); set('C', 'M', 33.60);
    set('C', 'P', 20.26); set('C', 'Q', -6.54); set('C', 'T', 33.60); set('C', 'V', -6.54);
    set('C', 'W', 24.68);
    // D
    set('D', 'F', -6.54); set('D', 'K', -7.49); set('D', 'R', -6.54); set('D', 'S', 20.26);
    set('D', 'T', -14.03);
    // E
    set('E', 'C', 44.94); set('E', 'D', 20.26); set('E', 'E', 33.60); set('E', 'H', -6.54);
    set('E', 'I', 20.26); set('E', 'P', 20.26); set('E', 'Q', 20.26); set('E', 'S', 20.26);
    set('E', 'W', -14.03);
    // F
    set('F', 'D', 13.34); set('F', 'K', -14.03); set('F', 'P', 20.26); set('F', 'Y', 33.60);
    // G
    set('G', 'A', -7.49); set('G', 'E', -6.54); set('G', 'G', 13.34); set('G', 'I', -7.49);
    set('G', 'K', -7.49); set('G', 'N', -7.49); set('G', 'T', -7.49); set('G', 'W', 13.34);
    set('G', 'Y', -7.49);
    // H
    set('H', 'F', -9.37); set('H', 'G', -9.37); set('H', 'I', 44.94); set('H', 'K', 24.68);
    set('H', 'N', 24.68); set('H', 'P', -1.88); set('H', 'T', -6.54); set('H', 'W', -1.88);
    set('H', 'Y', 44.94);
    // I
    set('I', 'E', 44.94); set('I', 'H', 13.34); set('I', 'K', -7.49); set('I', 'L', 20.26);
    set('I', 'P', -1.88); set('I', 'V', -7.49);
    // K
    set('K', 'G', -7.49); set('K', 'I', -7.49); set('K', 'L', -7.49); set('K', 'M', 33.60);
    set('K', 'P', -6.54); set('K', 'Q', 24.64); set('K', 'R', 33.60); set('K', 'V', -7.49);
    // L
    set('L', 'K', -7.49); set('L', 'P', 20.26); set('L', 'Q', 33.60); set('L', 'R', 20.26);
    set('L', 'W', 24.68);
    // M
    set('M', 'A', 13.34); set('M', 'H', 58.28); set('M', 'M', -1.88); set('M', 'P', 44.94);
    set('M', 'Q', -6.54); set('M', 'R', -6.54); set('M', 'S', 44.94); set('M', 'T', -1.88);
    set('M', 'Y', 24.68);
    // N
    set('N', 'C', -1.88); set('N', 'F', -14.03); set('N', 'G', -14.03); set('N', 'I', 44.94);
    set('N', 'K', 24.68); set('N', 'P', -1.88); set('N', 'Q', -6.54); set('N', 'T', -7.49);
    set('N', 'W', -9.37);
    // P
    set('P', 'A', 20.26); set('P', 'C', -6.54); set('P', 'D', -6.54); set('P', 'E', 18.38);
    set('P', 'F', 20.26); set('P', 'M', -6.54); set('P', 'P', 20.26); set('P', 'Q', 20.26);
    set('P', 'R', -6.54); set('P', 'S', 20.26); set('P', 'V', 20.26); set('P', 'W', -1.88);
    // Q
    set('Q', 'C', -6.54); set('Q', 'D', 20.26); set('Q', 'E', 20.26); set('Q', 'F', -6.54);
    set('Q', 'P', 20.26); set('Q', 'Q', 20.26); set('Q', 'S', 44.94); set('Q', 'V', -6.54);
    set('Q', 'Y', -6.54);
    // R
    set('R', 'G', -7.49); set('R', 'H', 20.26); set('R', 'N', 13.34); set('R', 'P', 20.26);
    set('R', 'Q', 20.26); set('R', 'R', 58.28); set('R', 'S', 44.94); set('R', 'W', 58.28);
    set('R', 'Y', -6.54);
    // S
    set('S', 'C', 33.60); set('S', 'E', 20.26); set('S', 'P', 44.94); set('S', 'Q', 20.26);
    set('S', 'R', 20.26); set('S', 'S', 20.26);
    // T
    set('T', 'E', 20.26); set('T', 'F', 13.34); set('T', 'G', -7.49); set('T', 'N', -14.03);
    set('T', 'Q', -6.54); set('T', 'W', -14.03);
    // V
    set('V', 'D', -14.03); set('V', 'G', -7.49); set('V', 'K', -1.88); set('V', 'P', 20.26);
    set('V', 'T', -7.49); set('V', 'Y', -6.54);
    // W
    set('W', 'A', -14.03); set('W', 'G', -9.37); set('W', 'H', 24.68); set('W', 'L', 13.34);
    set('W', 'M', 24.68); set('W', 'N', 13.34); set('W', 'T', -14.03); set('W', 'V', -7.49);
    // Y
    set('Y', 'A', 24.68); set('Y', 'D', 24.68); set('Y', 'E', -6.54); set('Y', 'G', -7.49);
    set('Y', 'H', 13.34); set('Y', 'M', 44.94); set('Y', 'P', 13.34); set('Y', 'R', -15.91);
    set('Y', 'T', -7.49); set('Y', 'W', -9.37); set('Y', 'Y', 13.34);
    return t;
  }();
  return table;
}

bool in_set(char c, std::string_view set) { return set.find(c) != std::string_view::npos; }

}  // namespace

double eisenberg_value(char residue) { return kEisenberg[static_cast<size_t>(alpha_index(residue))]; }
double kyte_doolittle_value(char residue) { return kKyteDoolittle[static_cast<size_t>(alpha_index(residue))]; }

double side_chain_partial_charge(char residue, double ph) {
  if (double pka = pka_positive(residue); pka > 0.0) return positive_fraction(pka, ph);
  if (double pka = pka_negative(residue); pka > 0.0) return negative_fraction(pka, ph);
  return 0.0;
}

double net_charge(const corpus::PeptideSequence& seq, bool c_terminal_amidated, double ph) {
  double q = positive_fraction(kPkaNTerm, ph);
  if (!c_terminal_amidated) q += negative_fraction(kPkaCTerm, ph);
  for (char r : seq.str()) q += side_chain_partial_charge(r, ph);
  return q;
}

double molecular_weight(const corpus::PeptideSequence& seq, bool c_terminal_amidated) {
  double mw = kWaterMass + (c_terminal_amidated ? kAmidationDelta : 0.0);
  for (char r : seq.str()) mw += kResidueMass[static_cast<size_t>(alpha_index(r))];
  return mw;
}

double hydrophobic_moment(const corpus::PeptideSequence& seq, double angle_deg, const std::array<double, 20>& scale) {
  if (seq.size() == 0) throw DataError("hydrophobic_moment: empty sequence");
  const double delta = angle_deg * M_PI / 180.0;
  double sx = 0.0, sy = 0.0;
  int n = 0;
  for (char r : seq.str()) {
    double h = scale[static_cast<size_t>(alpha_index(r))];
    sx += h * std::cos(n * delta);
    sy += h * std::sin(n * delta);
    ++n;
  }
  return std::sqrt(sx * sx + sy * sy) / static_cast<double>(n);
}

double hydrophobic_moment(const corpus::PeptideSequence& seq, double angle_deg) {
  return hydrophobic_moment(seq, angle_deg, kEisenberg);
}

DescriptorVector descriptors(const corpus::PeptideSequence& seq, bool c_terminal_amidated, double ph) {
  if (seq.size() == 0) throw DataError("descriptors: empty sequence");
  const std::string& s = seq.str();
  const double n = static_cast<double>(s.size());

  DescriptorVector d;
  d.charge = net_charge(seq, c_terminal_amidated, ph);
  d.charge_density = d.charge / molecular_weight(seq, c_terminal_amidated);
  double h_sum = 0.0, kd_sum = 0.0;
  int hydrophobic = 0, aromatic = 0;
  double aliphatic = 0.0;
  for (char r : s) {
    h_sum += eisenberg_value(r);
    kd_sum += kyte_doolittle_value(r);
    if (in_set(r, "ACFILMVWY")) ++hydrophobic;
    if (in_set(r, "FWY")) ++aromatic;
    if (r == 'A') aliphatic += 1.0;
    if (r == 'V') aliphatic += 2.9;
    if (r == 'I' || r == 'L') aliphatic += 3.9;
  }
  d.hydrophobicity_h = h_sum / n;
  d.gravy = kd_sum / n;
  d.hydrophobic_ratio = hydrophobic / n;
  d.aromaticity = aromatic / n;
  d.aliphatic_index = 100.0 * aliphatic / n;
  d.hydrophobic_moment_uh = hydrophobic_moment(seq, 100.0);

  double diwv_sum = 0.0;
  for (size_t i = 0; i + 1 < s.size(); ++i)
    diwv_sum += diwv_table()[static_cast<size_t>(alpha_index(s[i]))][static_cast<size_t>(alpha_index(s[i + 1]))];
  d.instability_index = s.size() >= 2 ? 10.0 / n * diwv_sum : 0.0;

  // Isoelectric point by bisection; the charge model is monotone in pH.
  double lo = 0.0, hi = 14.0;
  double q_lo = net_charge(seq, c_terminal_amidated, lo);
  double q_hi = net_charge(seq, c_terminal_amidated, hi);
  if (q_lo <= 0.0) {
    d.isoelectric_point = 0.0;
  } else if (q_hi >= 0.0) {
    d.isoelectric_point = 14.0;  // never deprotonates to neutral in range
  } else {
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (lo + hi);
      if (net_charge(seq, c_terminal_amidated, mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    d.isoelectric_point = 0.5 * (lo + hi);
  }
  return d;
}

}  // namespace clsgen::analysis
