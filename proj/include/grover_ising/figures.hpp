#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grover_ising/experiments.hpp"
#include "grover_ising/svg_plot.hpp"

namespace grover_ising {

struct FigureTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

struct FigureBundle {
  int figure = 0;
  std::vector<FigureTable> tables;
  std::vector<std::pair<std::string, Plot>> plots;  // (file stem, plot)
  std::vector<std::pair<std::string, std::string>> summary;

  void note(const std::string& key, double value);
  void note(const std::string& key, const std::string& value);
};

/// Unset fields fall back to the sizes and realization counts of the
/// corresponding figure in the paper.
struct FigureOptions {
  std::optional<int> n_qubits;
  std::vector<int> n_qubits_list;  // multi-size figures 3, 4, 5, 10
  std::optional<int> realizations;
  double sigma_eps = 1.0;
  double sigma_j = 1.0;
  std::uint64_t seed = 0;
  int threads = 1;
  int bins = 60;
  int k_points = 20;
  std::vector<double> sigma_t_list;  // figure 3
  std::optional<double> sigma_t;     // figure 4
  std::optional<double> e_tar;       // figure 13
  std::optional<int> n;              // fixed iteration count (figures 2, 6-9)
};

inline constexpr int kFirstFigure = 2;
inline constexpr int kLastFigure = 13;

FigureBundle compute_figure(int figure, const FigureOptions& options);

/// Figures 6-9 from an existing ensemble (6/8: P_j scatter, 7/9: P' histograms).
FigureBundle figure_from_ensemble(const EnsembleResult& result, int figure);

/// Writes every table as <name>.csv, every plot as <stem>.svg and the summary
/// as fig<N>_summary.txt. An empty bundle or table is rejected before any file
/// is written; files already written are removed if a later write fails.
std::vector<std::filesystem::path> emit_figure(const FigureBundle& bundle,
                                               const std::filesystem::path& dir);

/// CSV with a header row, values formatted as %.12g.
void write_table_csv(const FigureTable& table, const std::filesystem::path& path);

}  // namespace grover_ising
