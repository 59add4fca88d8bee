#pragma once

#include <array>
#include <string>

#include "clsgen/corpus.hpp"

namespace clsgen::analysis {

// Physicochemical descriptor panel for a peptide at a given pH.
//
// Conventions (standard definitions behind the usual analysis tools):
//  - charge: Henderson-Hasselbalch partial charges over ionizable groups
//    (N-terminus; C-terminus unless amidated; D, E, C, Y negative;
//    K, R, H positive), in units of elementary charge.
//  - hydrophobicity_h: mean Eisenberg consensus-scale value.
//  - hydrophobic_moment_uh: helical-wheel vector sum at 100 deg/residue.
//  - hydrophobic_ratio: fraction of residues in {A,C,F,I,L,M,V,W,Y}.
//  - aromaticity: fraction of residues in {F,W,Y}.
//  - aliphatic_index: Ikai, 100*(fA + 2.9 fV + 3.9 (fI + fL)).
//  - instability_index: Guruprasad DIWV dipeptide sum, 10/L * sum.
//  - isoelectric_point: pH at which the charge model crosses zero.
//  - gravy: Kyte-Doolittle mean.
struct DescriptorVector {
  double charge = 0;
  double charge_density = 0;  // charge per Dalton
  double hydrophobicity_h = 0;
  double hydrophobic_moment_uh = 0;
  double hydrophobic_ratio = 0;
  double aromaticity = 0;
  double aliphatic_index = 0;
  double instability_index = 0;
  double isoelectric_point = 0;
  double gravy = 0;
};

// Column order for the descriptor CSV interface.
inline constexpr const char* kDescriptorCsvHeader =
    "charge,charge_density,hydrophobicity_h,hydrophobic_moment_uh,hydrophobic_ratio,aromaticity,aliphatic_index,"
    "instability_index,isoelectric_point,gravy";

DescriptorVector descriptors(const corpus::PeptideSequence& seq, bool c_terminal_amidated = true, double ph = 7.0);

// Net charge in elementary-charge units at the given pH.
double net_charge(const corpus::PeptideSequence& seq, bool c_terminal_amidated, double ph);

// Partial charge contributed by one ionizable side chain at the given pH
// (positive for K/R/H, negative for D/E/C/Y, 0 otherwise).
double side_chain_partial_charge(char residue, double ph);

// mu_H = |sum_n H_n (cos n*delta, sin n*delta)| / N on the Eisenberg scale.
double hydrophobic_moment(const corpus::PeptideSequence& seq, double angle_deg = 100.0);
// Same with a caller-provided scale indexed by alphabetical residue order.
double hydrophobic_moment(const corpus::PeptideSequence& seq, double angle_deg,
                          const std::array<double, 20>& scale);

double eisenberg_value(char residue);
double kyte_doolittle_value(char residue);
double molecular_weight(const corpus::PeptideSequence& seq, bool c_terminal_amidated);

}  // namespace clsgen::analysis
