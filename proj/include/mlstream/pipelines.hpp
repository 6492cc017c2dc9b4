#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mlstream/centrality.hpp"
#include "mlstream/measures.hpp"
#include "mlstream/walks.hpp"

namespace mls {

// Multi-step analyses shared by the command line tool and the acceptance
// runner.

/// Layers whose coordinate on `aspect` is `value`, or all layers when the
/// aspect is absent. Used to keep only face-to-face layers of contact data.
std::vector<LayerId> layers_where(const MultilayerStreamGraph& g, std::string_view aspect, std::string_view value);

struct WindowRow {
  std::size_t index = 0;
  TimeInterval window;
  Density intra_m;
  Density intra_f;
  Density inter_mf;
  Density global;
};

/// Cuts T into consecutive closed windows [origin + k w, origin + (k+1) w]
/// that meet T, default origin being midnight (UTC) of the day holding
/// T.start, and computes the gender group densities in each. Throws
/// MissingAspect without a "gender" aspect with M and F.
std::vector<WindowRow> gender_density_by_window(const MultilayerStreamGraph& g, Tick window,
                                                std::optional<Tick> origin = {},
                                                const std::vector<LayerId>& restrict_to = {});

void write_csv(std::ostream& os, const std::vector<WindowRow>& rows);

/// Group density matrix over the elementary layers of `aspect`.
DensityMatrix aspect_density_matrix(const MultilayerStreamGraph& g, std::string_view aspect,
                                    const std::vector<LayerId>& restrict_to = {});

/// Mean of `repeats` exposure matrices drawn with seeds seed, seed+1, ...
ExposureMatrix averaged_exposure(const MultilayerStreamGraph& g, const LayerGrouping& columns,
                                 const StartSampling& starts, const WalkPolicy& policy, std::size_t repeats);

struct RankComparison {
  std::vector<std::string> layers;
  Eigen::VectorXd coverage;
  Eigen::VectorXd coverage_rank;
  Eigen::VectorXd centrality;
  Eigen::VectorXd centrality_rank;
  double rho = 0.0;
  CentralityReport report;
};

/// Walker coverage per column next to superimposed centrality, both
/// averaged over `repeats` seeds, with their Spearman correlation.
RankComparison compare_coverage_and_centrality(const MultilayerStreamGraph& g, const LayerGrouping& columns,
                                               const StartSampling& starts, const WalkPolicy& policy,
                                               std::size_t repeats = 1, const SolverOptions& solver = {});

/// layer,coverage,coverage_rank,centrality,centrality_rank
void write_csv(std::ostream& os, const RankComparison& r);

}  // namespace mls
