#include "netdiff/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace netdiff {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

// Line-oriented reader that skips comments and tracks position for
// diagnostics. A blank line is significant only where the format says so.
class LineReader {
public:
    LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    // Next non-comment, non-blank line; throws at end of input.
    std::string next_content_line() {
        std::string line;
        while (take(line)) {
            if (is_comment(line)) continue;
            if (is_blank(line)) continue;
            return line;
        }
        throw ParseError(name_ + ": unexpected end of file", line_no_);
    }

    // Next non-comment line, blank allowed. Returns false at end of input.
    bool next_line_or_blank(std::string& line) {
        while (take(line)) {
            if (is_comment(line)) continue;
            return true;
        }
        return false;
    }

    bool at_end() {
        std::string line;
        while (take(line)) {
            if (is_comment(line) || is_blank(line)) continue;
            putback_ = line;
            has_putback_ = true;
            return false;
        }
        return true;
    }

    long line_number() const { return line_no_; }
    const std::string& name() const { return name_; }

    static bool is_blank(const std::string& s) {
        return s.find_first_not_of(" \t\r") == std::string::npos;
    }

private:
    bool take(std::string& line) {
        if (has_putback_) {
            line = putback_;
            has_putback_ = false;
            return true;
        }
        if (!std::getline(in_, line)) return false;
        ++line_no_;
        return true;
    }
    static bool is_comment(const std::string& s) {
        const auto pos = s.find_first_not_of(" \t\r");
        return pos != std::string::npos && s[pos] == '#';
    }

    std::istream& in_;
    std::string name_;
    long line_no_ = 0;
    std::string putback_;
    bool has_putback_ = false;
};

std::vector<double> parse_floats(const std::string& line, const LineReader& rd) {
    std::vector<double> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw ParseError(rd.name() + ": expected a number, got '" + tok + "'",
                             rd.line_number());
        out.push_back(v);
    }
    return out;
}

long parse_positive_int(const std::string& tok, const LineReader& rd, const char* what) {
    long v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || v < 1)
        throw ParseError(rd.name() + ": " + what + " must be a positive integer, got '" +
                             tok + "'",
                         rd.line_number());
    return v;
}

template <typename Loader>
auto load_from_file(const std::string& path, Loader loader) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "' for reading");
    return loader(in, path);
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    return out;
}

} // namespace

Eigen::MatrixXd load_matrix(std::istream& in, const std::string& name) {
    LineReader rd(in, name);
    std::istringstream header(rd.next_content_line());
    std::string tok1, tok2, extra;
    header >> tok1;
    const long rows = parse_positive_int(tok1, rd, "row count");
    long cols = rows;
    if (header >> tok2) {
        cols = parse_positive_int(tok2, rd, "column count");
        if (header >> extra)
            throw ParseError(name + ": matrix header has more than two fields",
                             rd.line_number());
    }

    Eigen::MatrixXd m(rows, cols);
    for (long i = 0; i < rows; ++i) {
        const auto values = parse_floats(rd.next_content_line(), rd);
        if (static_cast<long>(values.size()) != cols)
            throw ParseError(name + ": row " + std::to_string(i + 1) + " has " +
                                 std::to_string(values.size()) + " entries, expected " +
                                 std::to_string(cols),
                             rd.line_number());
        for (long j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(j)];
    }
    if (!m.allFinite()) throw ParseError(name + ": matrix has non-finite entries");
    return m;
}

void save_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    out << m.rows();
    if (m.cols() != m.rows()) out << ' ' << m.cols();
    out << '\n';
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

StateVector load_vector(std::istream& in, const std::string& name) {
    LineReader rd(in, name);
    std::istringstream header(rd.next_content_line());
    std::string tok;
    header >> tok;
    const long n = parse_positive_int(tok, rd, "vector length");

    StateVector v(n);
    for (long i = 0; i < n; ++i) {
        const auto values = parse_floats(rd.next_content_line(), rd);
        if (values.size() != 1)
            throw ParseError(name + ": expected one value per line, got " +
                                 std::to_string(values.size()),
                             rd.line_number());
        v(i) = values[0];
    }
    if (!v.allFinite()) throw ParseError(name + ": vector has non-finite entries");
    return v;
}

void save_vector(std::ostream& out, const StateVector& v) {
    out << v.size() << '\n';
    for (long i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

Trajectory load_trajectory(std::istream& in, const std::string& name) {
    LineReader rd(in, name);
    std::istringstream header(rd.next_content_line());
    std::string tok1, tok2;
    if (!(header >> tok1 >> tok2))
        throw ParseError(name + ": trajectory header must be 'N T'", rd.line_number());
    const long n = parse_positive_int(tok1, rd, "state length");
    const long t = parse_positive_int(tok2, rd, "step count");

    Trajectory traj;
    traj.states.reserve(static_cast<std::size_t>(t) + 1);
    for (long s = 0; s <= t; ++s) {
        const auto values = parse_floats(rd.next_content_line(), rd);
        if (static_cast<long>(values.size()) != n)
            throw ParseError(name + ": state " + std::to_string(s) + " has " +
                                 std::to_string(values.size()) + " entries, expected " +
                                 std::to_string(n),
                             rd.line_number());
        StateVector v(n);
        for (long j = 0; j < n; ++j) v(j) = values[static_cast<std::size_t>(j)];
        traj.states.push_back(std::move(v));
    }
    return traj;
}

void save_trajectory(std::ostream& out, const Trajectory& traj) {
    if (traj.states.empty()) throw DomainError("save_trajectory: empty trajectory");
    out << traj.states.front().size() << ' ' << traj.step_count() << '\n';
    for (const auto& s : traj.states) {
        for (long j = 0; j < s.size(); ++j) {
            if (j) out << ' ';
            out << format_double(s(j));
        }
        out << '\n';
    }
}

NetworkSequence load_sequence(std::istream& in, const std::string& name) {
    LineReader rd(in, name);
    std::istringstream header(rd.next_content_line());
    std::string tok1, tok2;
    if (!(header >> tok1 >> tok2))
        throw ParseError(name + ": sequence header must be 'N T'", rd.line_number());
    const long n = parse_positive_int(tok1, rd, "vertex count");
    const long t = parse_positive_int(tok2, rd, "cross-section count");

    NetworkSequence seq;
    seq.graphs.reserve(static_cast<std::size_t>(t));
    for (long b = 0; b < t; ++b) {
        AdjacencyMatrix g(static_cast<int>(n));
        for (long i = 0; i < n; ++i) {
            const std::string line = rd.next_content_line();
            std::istringstream ss(line);
            std::string cell;
            long j = 0;
            while (ss >> cell) {
                if (j >= n)
                    throw ParseError(name + ": block " + std::to_string(b + 1) + " row " +
                                         std::to_string(i + 1) + " has more than " +
                                         std::to_string(n) + " entries",
                                     rd.line_number());
                if (cell == "1") {
                    if (i == j)
                        throw ParseError(name + ": nonzero diagonal at block " +
                                             std::to_string(b + 1),
                                         rd.line_number());
                    g.set(static_cast<int>(i), static_cast<int>(j), true);
                } else if (cell != "0") {
                    throw ParseError(name + ": adjacency entries must be 0 or 1, got '" +
                                         cell + "'",
                                     rd.line_number());
                }
                ++j;
            }
            if (j != n)
                throw ParseError(name + ": block " + std::to_string(b + 1) + " row " +
                                     std::to_string(i + 1) + " has " + std::to_string(j) +
                                     " entries, expected " + std::to_string(n),
                                 rd.line_number());
        }
        seq.graphs.push_back(std::move(g));
    }
    if (!rd.at_end())
        throw ParseError(name + ": trailing content after the " + std::to_string(t) +
                             " cross-sections declared in the header",
                         rd.line_number());
    return seq;
}

void save_sequence(std::ostream& out, const NetworkSequence& seq) {
    if (seq.graphs.empty()) throw DomainError("save_sequence: empty sequence");
    const int n = seq.size();
    out << n << ' ' << seq.length() << '\n';
    for (std::size_t b = 0; b < seq.graphs.size(); ++b) {
        if (b) out << '\n';
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (j) out << ' ';
                out << (seq.graphs[b].at(i, j) ? '1' : '0');
            }
            out << '\n';
        }
    }
}

Eigen::MatrixXd load_matrix_file(const std::string& path) {
    return load_from_file(path, [](std::istream& in, const std::string& p) {
        return load_matrix(in, p);
    });
}
StateVector load_vector_file(const std::string& path) {
    return load_from_file(path, [](std::istream& in, const std::string& p) {
        return load_vector(in, p);
    });
}
Trajectory load_trajectory_file(const std::string& path) {
    return load_from_file(path, [](std::istream& in, const std::string& p) {
        return load_trajectory(in, p);
    });
}
NetworkSequence load_sequence_file(const std::string& path) {
    return load_from_file(path, [](std::istream& in, const std::string& p) {
        return load_sequence(in, p);
    });
}

void save_matrix_file(const std::string& path, const Eigen::MatrixXd& m) {
    auto out = open_for_write(path);
    save_matrix(out, m);
}
void save_vector_file(const std::string& path, const StateVector& v) {
    auto out = open_for_write(path);
    save_vector(out, v);
}
void save_trajectory_file(const std::string& path, const Trajectory& traj) {
    auto out = open_for_write(path);
    save_trajectory(out, traj);
}
void save_sequence_file(const std::string& path, const NetworkSequence& seq) {
    auto out = open_for_write(path);
    save_sequence(out, seq);
}

} // namespace netdiff
