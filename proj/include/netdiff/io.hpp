#ifndef NETDIFF_IO_HPP
#define NETDIFF_IO_HPP

#include <iosfwd>
#include <string>

#include "netdiff/diffusion.hpp"
#include "netdiff/linalg.hpp"
#include "netdiff/network.hpp"

namespace netdiff {

// Text formats, shared repo-wide. '#'-prefixed lines are comments anywhere.
//
//   matrix:     header "N" (square) or "N M", then N rows of M floats
//   vector:     header "N", then N floats, one per line
//   trajectory: header "N T", then T+1 rows of N floats (row t = state y_t)
//   sequence:   header "N T", then T blocks of N rows of N 0/1 digits,
//               blocks separated by a blank line

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

Eigen::MatrixXd load_matrix(std::istream& in, const std::string& name);
Eigen::MatrixXd load_matrix_file(const std::string& path);
void save_matrix(std::ostream& out, const Eigen::MatrixXd& m);
void save_matrix_file(const std::string& path, const Eigen::MatrixXd& m);

StateVector load_vector(std::istream& in, const std::string& name);
StateVector load_vector_file(const std::string& path);
void save_vector(std::ostream& out, const StateVector& v);
void save_vector_file(const std::string& path, const StateVector& v);

Trajectory load_trajectory(std::istream& in, const std::string& name);
Trajectory load_trajectory_file(const std::string& path);
void save_trajectory(std::ostream& out, const Trajectory& traj);
void save_trajectory_file(const std::string& path, const Trajectory& traj);

NetworkSequence load_sequence(std::istream& in, const std::string& name);
NetworkSequence load_sequence_file(const std::string& path);
void save_sequence(std::ostream& out, const NetworkSequence& seq);
void save_sequence_file(const std::string& path, const NetworkSequence& seq);

} // namespace netdiff

#endif
