#pragma once

#include <string>
#include <vector>

#include "yspde/paths.hpp"
#include "yspde/sewing.hpp"
#include "yspde/solver.hpp"

namespace yspde {

/// Doubles rendered with 17 significant digits, '.' decimal, no grouping;
/// files use LF endings.  Identical inputs give identical bytes.
std::string fmt17(double v);

/// Path CSV: header t,v_1,...,v_e, one row per grid node.
void write_driver_csv(const std::string& path, const DriverPath& p);
DriverPath read_driver_csv(const std::string& path);

/// Spectral field CSV: header k_1[,k_2[,k_3]],component,re,im.
void write_field_csv(const std::string& path, const SpectralField& f);
SpectralField read_field_csv(const std::string& path, int dim, int components, int cutoff);

/// Defect report CSV: level,max_defect,ratio_to_prev.
void write_defect_csv(const std::string& path, const std::vector<DefectLevel>& levels);

/// Trajectory CSV: t, Re/Im of the selected axis-0 modes of component 0,
/// then |u_t|_gamma for each gamma in gamma_list.
void write_trajectory_csv(const std::string& path, const FieldPath& u,
                          const SemigroupHandle& sg, const std::vector<int>& modes,
                          const std::vector<double>& gamma_list);

/// Flat key = value sidecar in JSON.
void write_metadata(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv);

void write_text(const std::string& path, const std::string& text);

}  // namespace yspde
