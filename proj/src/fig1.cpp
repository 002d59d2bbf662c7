#include "noonsim/commands.hpp"

#include <fstream>
#include <stdexcept>

namespace noonsim {

std::vector<Fig1Panel> fig1_panels(const Fig1Config& config) {
  SweepConfig sc;
  sc.alpha_min = 0.0;
  sc.alpha_max = config.alpha_max;
  sc.alpha_step = config.alpha_step;
  sc.fixed_squeeze = config.fixed_squeeze;
  sc.jobs = config.jobs;
  const auto grid = alpha_grid(sc.alpha_min, sc.alpha_max, sc.alpha_step);
  if (config.jobs < 1) throw std::invalid_argument("--jobs must be >= 1");

  std::vector<Fig1Panel> panels;
  for (int n : {2, 4, 6, 8}) {
    Fig1Panel p;
    p.total_n = n;
    p.cat_family = n % 4 == 0 ? Family::ecs_cs : Family::ocs_cs;
    p.alpha_mags = grid;
    p.cat_overlap.resize(grid.size());
    p.sv_overlap.resize(grid.size());
    p.records.resize(2 * grid.size());
    panels.push_back(std::move(p));
  }
  const int per_panel = static_cast<int>(grid.size());
  parallel_for(4 * per_panel, config.jobs, [&](int i) {
    Fig1Panel& p = panels[i / per_panel];
    const int k = i % per_panel;
    p.records[k] = sweep_point(p.cat_family, p.total_n, grid[k], sc);
    p.records[per_panel + k] = sweep_point(Family::sv_cs, p.total_n, grid[k], sc);
    p.cat_overlap[k] = p.records[k].overlap;
    p.sv_overlap[k] = p.records[per_panel + k].overlap;
  });
  return panels;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

}  // namespace

std::vector<std::filesystem::path> write_fig1(const std::filesystem::path& dir, const std::vector<Fig1Panel>& panels) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;

  for (const auto& p : panels) {
    const auto path = dir / ("fig1_N" + std::to_string(p.total_n) + ".csv");
    auto os = open_out(path);
    os << "alpha_mag," << to_string(p.cat_family) << "_overlap,sv-cs_overlap\n";
    for (std::size_t k = 0; k < p.alpha_mags.size(); ++k)
      os << format_number(p.alpha_mags[k]) << ',' << format_number(p.cat_overlap[k]) << ','
         << format_number(p.sv_overlap[k]) << '\n';
    written.push_back(path);
  }

  {
    const auto path = dir / "fig1.dat";
    auto os = open_out(path);
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const auto& p = panels[i];
      if (i) os << "\n\n";
      os << "# N=" << p.total_n << " alpha_mag " << to_string(p.cat_family) << " sv-cs\n";
      for (std::size_t k = 0; k < p.alpha_mags.size(); ++k)
        os << format_number(p.alpha_mags[k]) << ' ' << format_number(p.cat_overlap[k]) << ' '
           << format_number(p.sv_overlap[k]) << '\n';
    }
    written.push_back(path);
  }

  {
    const auto path = dir / "fig1.gp";
    auto os = open_out(path);
    os << "set terminal pngcairo size 1000,800\n"
          "set output 'fig1.png'\n"
          "set multiplot layout 2,2\n"
          "set xlabel '|alpha|'\n"
          "set ylabel 'overlap'\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const auto& p = panels[i];
      os << "set title 'N = " << p.total_n << "'\n"
         << "plot 'fig1.dat' index " << i << " using 1:2 with lines dashtype 2 title '" << to_string(p.cat_family)
         << "', '' index " << i << " using 1:3 with lines title 'sv-cs'\n";
    }
    os << "unset multiplot\n";
    written.push_back(path);
  }

  {
    const auto path = dir / "fig1_sweep.csv";
    auto os = open_out(path);
    std::vector<SweepRecord> records;
    for (const auto& p : panels) records.insert(records.end(), p.records.begin(), p.records.end());
    write_sweep_csv(os, records);
    written.push_back(path);
  }
  return written;
}

}  // namespace noonsim
