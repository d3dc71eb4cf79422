#include "igame/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace igame {

std::string format_double(double value) {
    char buf[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) return buf;
    }
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& field, std::size_t row) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError("row " + std::to_string(row) + ": not a number: '" + field + "'", row);
    }
    return value;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    return out;
}

struct Table {
    std::vector<std::string> header;
    Eigen::MatrixXd values;
    TimeGrid grid;  // derived from the t column
};

Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open for reading: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Table table;
    table.header = split_line(line);
    if (table.header.empty() || table.header.front() != "t") {
        throw ParseError(path.string() + ": header must start with column t", 1);
    }

    std::vector<std::vector<double>> rows;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != table.header.size()) {
            throw ParseError("row " + std::to_string(row_number) + ": expected " +
                                 std::to_string(table.header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             row_number);
        }
        std::vector<double> row(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j) row[j] = parse_double(fields[j], row_number);
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw ParseError(path.string() + ": need at least two data rows", row_number);

    table.values.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(table.header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }

    const Eigen::VectorXd t = table.values.col(0);
    const std::size_t n_steps = rows.size() - 1;
    const double t0 = t[0];
    const double dt = (t[t.size() - 1] - t0) / static_cast<double>(n_steps);
    if (!(dt > 0.0)) throw ParseError(path.string() + ": time column must be increasing", 2);
    const double tolerance = 1e-9 * std::max(1.0, std::abs(t[t.size() - 1] - t0));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k > 0 && !(t[static_cast<Eigen::Index>(k)] > t[static_cast<Eigen::Index>(k - 1)])) {
            throw ParseError("row " + std::to_string(k + 2) + ": time is not strictly increasing",
                             k + 2);
        }
        const double expected = t0 + static_cast<double>(k) * dt;
        if (std::abs(t[static_cast<Eigen::Index>(k)] - expected) > tolerance) {
            throw ParseError("row " + std::to_string(k + 2) + ": time grid step is not constant",
                             k + 2);
        }
    }
    table.grid = TimeGrid(t0, dt, n_steps);
    return table;
}

std::size_t count_prefixed(const std::vector<std::string>& header, const std::string& prefix,
                           std::size_t from) {
    std::size_t count = 0;
    for (std::size_t j = from; j < header.size(); ++j) {
        if (header[j].rfind(prefix, 0) == 0) {
            ++count;
        } else {
            break;
        }
    }
    return count;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t";
    for (std::size_t j = 1; j <= traj.state_dim(); ++j) out << ",phi_" << j;
    for (std::size_t j = 1; j <= traj.control_dim(); ++j) out << ",u_" << j;
    out << "\n";
    for (std::size_t k = 0; k < traj.grid.n_nodes(); ++k) {
        out << format_double(traj.grid.time(k));
        for (Eigen::Index j = 0; j < traj.states.cols(); ++j) {
            out << ',' << format_double(traj.states(static_cast<Eigen::Index>(k), j));
        }
        if (traj.controls) {
            for (Eigen::Index j = 0; j < traj.controls->cols(); ++j) {
                out << ',' << format_double((*traj.controls)(static_cast<Eigen::Index>(k), j));
            }
        }
        out << "\n";
    }
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    const Table table = read_table(path);
    const std::size_t d = count_prefixed(table.header, "phi_", 1);
    if (d == 0) throw ParseError(path.string() + ": no phi_* columns", 1);
    const std::size_t k = count_prefixed(table.header, "u_", 1 + d);
    if (1 + d + k != table.header.size()) {
        throw ParseError(path.string() + ": unexpected columns in the header", 1);
    }
    Eigen::MatrixXd states = table.values.middleCols(1, static_cast<Eigen::Index>(d));
    if (k == 0) return Trajectory(table.grid, std::move(states));
    Eigen::MatrixXd controls =
        table.values.middleCols(1 + static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k));
    return Trajectory(table.grid, std::move(states), std::move(controls));
}

void write_signal_csv(const std::filesystem::path& path, const ControlSignal& signal,
                      const std::string& value_prefix) {
    auto out = open_out(path);
    out << "t";
    for (std::size_t j = 1; j <= signal.dim(); ++j) out << ',' << value_prefix << '_' << j;
    out << "\n";
    for (std::size_t k = 0; k < signal.grid.n_nodes(); ++k) {
        out << format_double(signal.grid.time(k));
        for (Eigen::Index j = 0; j < signal.values.cols(); ++j) {
            out << ',' << format_double(signal.values(static_cast<Eigen::Index>(k), j));
        }
        out << "\n";
    }
}

ControlSignal read_signal_csv(const std::filesystem::path& path, SignalRole role) {
    const Table table = read_table(path);
    Eigen::MatrixXd values = table.values.rightCols(table.values.cols() - 1);
    return ControlSignal(table.grid, std::move(values), role);
}

void write_words_csv(const std::filesystem::path& path, const WordSequence& words,
                     const Partition& partition, const TimeGrid& grid) {
    auto out = open_out(path);
    out << "segment,start_t,end_t";
    if (words.quantized) {
        out << ",code";
    } else {
        for (Eigen::Index j = 1; j <= words.words.cols(); ++j) out << ",w_" << j;
    }
    out << "\n";
    for (std::size_t seg = 0; seg < words.n_segments(); ++seg) {
        out << seg << ',' << format_double(grid.time(partition.breakpoints[seg])) << ','
            << format_double(grid.time(partition.breakpoints[seg + 1]));
        if (words.quantized) {
            out << ',' << words.codes[seg];
        } else {
            for (Eigen::Index j = 0; j < words.words.cols(); ++j) {
                out << ',' << format_double(words.words(static_cast<Eigen::Index>(seg), j));
            }
        }
        out << "\n";
    }
}

void write_state_csv(const std::filesystem::path& path, const QuantumState& state,
                     const FockSpace& space) {
    auto out = open_out(path);
    out << "basis_index,occupations,re,im\n";
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto occ = space.occupations(i);
        out << i << ',';
        for (std::size_t j = 0; j < occ.size(); ++j) {
            if (j > 0) out << '|';
            out << occ[j];
        }
        const Complex c = state.coefficients[static_cast<Eigen::Index>(i)];
        out << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << "\n";
    }
}

void write_series_csv(const std::filesystem::path& path, const std::string& x_name,
                      const std::string& y_name, const std::vector<double>& x,
                      const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionMismatch("write_series_csv: column lengths differ");
    auto out = open_out(path);
    out << x_name << ',' << y_name << "\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << format_double(x[i]) << ',' << format_double(y[i]) << "\n";
    }
}

}  // namespace igame
