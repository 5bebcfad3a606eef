#ifndef NETDIFF_PLOT_HPP
#define NETDIFF_PLOT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "netdiff/study.hpp"

namespace netdiff {

/// Writes a self-contained SVG plot of mean approximation error versus mean
/// Hamming velocity, one marker per rate bin for each of the two
/// approximations, with 95% confidence bars where present. Output is
/// deterministic for fixed input. Axes switch to log scale when the data
/// are positive and span more than two decades. Requires >= 2 summaries.
void emit_plot(std::ostream& out, const std::vector<RateSummary>& summaries);
void emit_plot_file(const std::string& path, const std::vector<RateSummary>& summaries);

} // namespace netdiff

#endif
