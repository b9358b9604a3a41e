#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "eigencert/certify.hpp"
#include "eigencert/fem.hpp"
#include "eigencert/mesh.hpp"
#include "eigencert/spectra.hpp"

namespace eigencert {

enum class EnclosureSource { exact_square, file };
enum class ChSource { formula_0493h, file };

/// Batch run description. Square levels are subdivisions per side; dumbbell
/// levels are red-refinement counts of the initial mesh.
struct RunConfig {
  DomainSpec domain = DomainSpec::unit_square();
  ElementKind element = ElementKind::p1;
  std::vector<int> levels;
  ClusterSpec clusters;
  EnclosureSource enclosure_source = EnclosureSource::exact_square;
  std::filesystem::path enclosure_path;
  ChSource ch_source = ChSource::formula_0493h;
  std::filesystem::path ch_path;
  int iterations = 5;
  EpsilonMode mode = EpsilonMode::exact;
  /// Discrete eigenpairs computed beyond the last cluster.
  int extra_eigenpairs = 5;
};

/// Sectioned key-value text:
///   [domain]          kind = unit_square | dumbbell
///   [discretization]  element = p1 | cr, levels = 8 16 32
///   [clusters]        1 = 1 1, 2 = 2 3, ...
///   [bounds]          enclosures = exact_square | <path>, ch = formula_0493h | <path>,
///                     iterations = 5, mode = exact | gershgorin
/// Relative paths resolve against `base_dir`. Throws ConfigError naming the key.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig read_config(const std::filesystem::path& path);

/// Throws ConfigError when the combination cannot be run.
void validate(const RunConfig& config);

}  // namespace eigencert
