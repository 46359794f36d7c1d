/*!
  \file report.hpp
  \brief Design comparison reports: area, depth, switching activity and PDP per operation type
*/

#pragma once

#include "metrics.hpp"
#include "multipliers.hpp"
#include "netlist.hpp"

#include <json.hpp>

#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpmul
{

inline constexpr uint64_t default_seed = 0xC0FFEE;

/*! \brief Workload length per operation type: 10000 cycles up to 16 bits, 15000 beyond. */
inline uint64_t default_vector_count( uint32_t n )
{
  return n <= 16u ? 10000u : 15000u;
}

inline char const* const proxy_disclaimer =
    "Area, depth and power are technology-free proxies: static-CMOS transistor-count area, "
    "gate-count critical path, and zero-delay toggle counts (one transition per net per cycle, "
    "glitches not modeled) weighted by (1 + fanout). The 90 nm reference figures are published "
    "synthesis results for the twin-precision baseline and the BEC + clock-gated recursive design; "
    "they are printed for direction only and are not reproduced.";

struct bench_config
{
  uint64_t seed{ default_seed };
  uint64_t vectors{ 0 }; /*!< 0 selects `default_vector_count` */
  area_table area{ area_table::transistor_count() };
  delay_table delay{ delay_table::unit() };
  std::string area_source{ "builtin:transistor-count" };
  std::string delay_source{ "builtin:unit" };
};

struct design_figures
{
  std::string tag;
  double area{ 0 };
  double depth{ 0 };
  std::size_t gates{ 0 };
  std::size_t registers{ 0 };
};

struct operation_row
{
  std::string design;
  std::string operation;
  bool applicable{ false };
  std::string mode;
  bool zero_high_halves{ false };
  power_summary power;
  double pdp{ 0 };
  std::optional<double> delta_area;
  std::optional<double> delta_depth;
  std::optional<double> delta_power;
  std::optional<double> delta_pdp;
};

struct comparison_report
{
  uint32_t width{ 0 };
  std::string policy;
  std::string baseline;
  bench_config config;
  uint64_t vectors{ 0 };
  std::vector<design_figures> designs;
  std::vector<operation_row> rows;

  operation_row const* find( std::string const& design, std::string const& operation ) const
  {
    for ( auto const& r : rows )
    {
      if ( r.design == design && r.operation == operation )
      {
        return &r;
      }
    }
    return nullptr;
  }
};

/*! \brief 100 (candidate - baseline) / baseline; negative means the candidate is smaller. */
inline std::optional<double> percent_delta( double candidate, double baseline )
{
  if ( baseline == 0 )
  {
    return std::nullopt;
  }
  return 100.0 * ( candidate - baseline ) / baseline;
}

/*! \brief Runs every design on the default workloads and tabulates deltas against `baseline`. */
inline comparison_report compare( std::vector<circuit> const& designs, std::string const& baseline, bench_config const& config = {} )
{
  if ( designs.empty() )
  {
    throw std::invalid_argument( "compare: no designs" );
  }
  comparison_report report;
  report.width = designs.front().width();
  report.policy = designs.front().meta_value( "policy" ).value_or( "" );
  report.baseline = baseline;
  report.config = config;
  report.vectors = config.vectors != 0 ? config.vectors : default_vector_count( report.width );

  bool baseline_found = false;
  for ( auto const& d : designs )
  {
    if ( d.width() != report.width )
    {
      throw std::invalid_argument( "compare: width mismatch between " + designs.front().variant() + " and " + d.variant() );
    }
    baseline_found = baseline_found || d.variant() == baseline;
  }
  if ( !baseline_found )
  {
    throw std::invalid_argument( "compare: baseline " + baseline + " is not among the designs" );
  }

  for ( auto const& d : designs )
  {
    report.designs.push_back( { d.variant(), area( d, config.area ), depth( d, config.delay ).delay, d.gates().size(), d.registers().size() } );
  }

  for ( std::size_t i = 0; i < designs.size(); ++i )
  {
    auto const& d = designs[i];
    for ( auto kind : all_operation_kinds )
    {
      operation_row row;
      row.design = d.variant();
      row.operation = operation_label( kind, report.width );
      auto plan = plan_workload( d, kind );
      row.applicable = plan.applicable;
      if ( plan.applicable )
      {
        row.mode = std::string( mode_code( plan.mode ) );
        row.zero_high_halves = plan.zero_high_halves;
        row.power = power_proxy( d, make_workload( d, plan, report.vectors, config.seed ) );
        row.pdp = report.designs[i].depth * row.power.weighted_per_cycle;
      }
      report.rows.push_back( row );
    }
  }

  design_figures const* base = nullptr;
  for ( auto const& f : report.designs )
  {
    if ( f.tag == baseline )
    {
      base = &f;
    }
  }
  for ( auto& row : report.rows )
  {
    design_figures const* fig = nullptr;
    for ( auto const& f : report.designs )
    {
      if ( f.tag == row.design )
      {
        fig = &f;
      }
    }
    row.delta_area = percent_delta( fig->area, base->area );
    row.delta_depth = percent_delta( fig->depth, base->depth );
    auto const* base_row = report.find( baseline, row.operation );
    if ( row.applicable && base_row != nullptr && base_row->applicable )
    {
      row.delta_power = percent_delta( row.power.weighted_per_cycle, base_row->power.weighted_per_cycle );
      row.delta_pdp = percent_delta( row.pdp, base_row->pdp );
    }
  }
  return report;
}

/* ---------------------------------------------------------------------- */
/* published 90 nm figures, shown beside the proxies                      */
/* ---------------------------------------------------------------------- */

struct reference_figures
{
  double area_kum2;
  double time;
  std::array<double, 3> power_mw; /* one full, two half, one half */
};

struct reference_set
{
  reference_figures baseline;
  reference_figures proposed;
  double delta_area;
  double delta_time;
  std::array<double, 3> delta_power;
  double energy_baseline;
  double energy_proposed;
  double delta_energy;
};

inline std::optional<reference_set> reference_for_width( uint32_t n )
{
  if ( n == 16u )
  {
    return reference_set{ { 12.304, 3.0, { 1.285, 0.600, 0.325 } },
                          { 12.471, 2.6, { 1.331, 0.568, 0.260 } },
                          1.357, -13.334, { 3.476, -5.261, -19.927 },
                          3.8484, 3.4593, -10.1106 };
  }
  if ( n == 32u )
  {
    return reference_set{ { 41.656, 5.5, { 6.217, 2.852, 1.507 } },
                          { 42.985, 4.25, { 4.362, 1.846, 0.985 } },
                          3.190, -22.727, { -29.835, -35.278, -34.618 },
                          34.1971, 18.5397, -45.7825 };
  }
  return std::nullopt;
}

/* ---------------------------------------------------------------------- */
/* rendering                                                              */
/* ---------------------------------------------------------------------- */

inline nlohmann::ordered_json to_json( comparison_report const& r )
{
  using ojson = nlohmann::ordered_json;
  auto opt = []( std::optional<double> v ) { return v ? ojson( *v ) : ojson( nullptr ); };

  ojson j;
  j["disclaimer"] = proxy_disclaimer;
  j["width"] = r.width;
  j["policy"] = r.policy;
  j["seed"] = r.config.seed;
  j["vectors"] = r.vectors;
  j["baseline"] = r.baseline;
  j["area_table"] = { { "source", r.config.area_source }, { "costs", to_json( r.config.area ) } };
  j["delay_table"] = { { "source", r.config.delay_source }, { "costs", to_json( r.config.delay ) } };

  j["designs"] = ojson::array();
  for ( auto const& d : r.designs )
  {
    ojson e;
    e["design"] = d.tag;
    e["area"] = d.area;
    e["depth"] = d.depth;
    e["gates"] = d.gates;
    e["registers"] = d.registers;
    j["designs"].push_back( e );
  }

  j["rows"] = ojson::array();
  for ( auto const& row : r.rows )
  {
    ojson e;
    e["design"] = row.design;
    e["operation"] = row.operation;
    e["applicable"] = row.applicable;
    if ( row.applicable )
    {
      e["mode"] = row.mode;
      e["zero_high_halves"] = row.zero_high_halves;
      e["cycles"] = row.power.cycles;
      e["toggles_per_cycle"] = row.power.toggles_per_cycle;
      e["weighted_toggles_per_cycle"] = row.power.weighted_per_cycle;
      e["pdp"] = row.pdp;
    }
    e["delta_percent"] = { { "area", opt( row.delta_area ) },
                           { "depth", opt( row.delta_depth ) },
                           { "power", opt( row.delta_power ) },
                           { "pdp", opt( row.delta_pdp ) } };
    j["rows"].push_back( e );
  }

  if ( auto ref = reference_for_width( r.width ) )
  {
    auto figures = []( reference_figures const& f ) {
      return ojson{ { "area_kum2", f.area_kum2 }, { "time", f.time }, { "power_mw", f.power_mw } };
    };
    j["reference_90nm"] = { { "baseline", figures( ref->baseline ) },
                            { "proposed", figures( ref->proposed ) },
                            { "delta_percent", { { "area", ref->delta_area }, { "time", ref->delta_time }, { "power", ref->delta_power } } },
                            { "energy", { { "baseline", ref->energy_baseline }, { "proposed", ref->energy_proposed }, { "delta_percent", ref->delta_energy } } } };
  }
  return j;
}

namespace detail
{

inline std::string fmt_num( double v, int decimals = 3 )
{
  char buf[64];
  std::snprintf( buf, sizeof( buf ), "%.*f", decimals, v );
  return buf;
}

inline std::string fmt_delta( std::optional<double> v )
{
  if ( !v )
  {
    return "-";
  }
  char buf[64];
  std::snprintf( buf, sizeof( buf ), "%+.3f", *v );
  return buf;
}

inline std::string render_table( std::vector<std::vector<std::string>> const& cells )
{
  std::vector<std::size_t> widths;
  for ( auto const& row : cells )
  {
    widths.resize( std::max( widths.size(), row.size() ), 0 );
    for ( std::size_t c = 0; c < row.size(); ++c )
    {
      widths[c] = std::max( widths[c], row[c].size() );
    }
  }
  std::ostringstream os;
  for ( std::size_t r = 0; r < cells.size(); ++r )
  {
    for ( std::size_t c = 0; c < cells[r].size(); ++c )
    {
      auto const& cell = cells[r][c];
      auto pad = std::string( widths[c] - cell.size(), ' ' );
      os << ( c == 0 ? "" : "  " ) << ( c < 2 ? cell + pad : pad + cell );
    }
    os << "\n";
    if ( r == 0 )
    {
      std::size_t total = 0;
      for ( auto w : widths )
      {
        total += w + 2;
      }
      os << std::string( total - 2, '-' ) << "\n";
    }
  }
  return os.str();
}

} // namespace detail

inline std::string to_text( comparison_report const& r )
{
  std::ostringstream os;
  os << "Multiplier comparison, N = " << r.width << ", policy " << r.policy << ", seed 0x" << to_hex( r.config.seed )
     << ", " << r.vectors << " vectors per operation type\n";
  os << "Baseline: " << r.baseline << "; area table " << r.config.area_source << "; delay table " << r.config.delay_source << "\n";
  os << "Note: " << proxy_disclaimer << "\n\n";

  std::vector<std::vector<std::string>> cells{ { "Design", "Operation", "Area", "Depth", "Toggles/cyc", "Weighted/cyc", "PDP",
                                                  "dArea%", "dDepth%", "dPower%", "dPDP%" } };
  for ( auto const& row : r.rows )
  {
    design_figures fig;
    for ( auto const& d : r.designs )
    {
      if ( d.tag == row.design )
      {
        fig = d;
      }
    }
    if ( !row.applicable )
    {
      cells.push_back( { row.design, row.operation, detail::fmt_num( fig.area, 0 ), detail::fmt_num( fig.depth, 0 ), "n/a", "n/a", "n/a",
                         detail::fmt_delta( row.delta_area ), detail::fmt_delta( row.delta_depth ), "-", "-" } );
      continue;
    }
    cells.push_back( { row.design, row.operation, detail::fmt_num( fig.area, 0 ), detail::fmt_num( fig.depth, 0 ),
                       detail::fmt_num( row.power.toggles_per_cycle ), detail::fmt_num( row.power.weighted_per_cycle ),
                       detail::fmt_num( row.pdp, 1 ), detail::fmt_delta( row.delta_area ), detail::fmt_delta( row.delta_depth ),
                       detail::fmt_delta( row.delta_power ), detail::fmt_delta( row.delta_pdp ) } );
  }
  os << detail::render_table( cells );

  if ( auto ref = reference_for_width( r.width ) )
  {
    os << "\nPublished 90 nm figures (twin-precision baseline -> BEC + clock-gated recursive design):\n";
    std::vector<std::vector<std::string>> refs{ { "Metric", "Operation", "Baseline", "Proposed", "Delta%" } };
    refs.push_back( { "Area (k um^2)", "all", detail::fmt_num( ref->baseline.area_kum2 ), detail::fmt_num( ref->proposed.area_kum2 ), detail::fmt_delta( ref->delta_area ) } );
    refs.push_back( { "Time", "all", detail::fmt_num( ref->baseline.time, 2 ), detail::fmt_num( ref->proposed.time, 2 ), detail::fmt_delta( ref->delta_time ) } );
    for ( std::size_t k = 0; k < 3u; ++k )
    {
      refs.push_back( { "Power (mW)", operation_label( all_operation_kinds[k], r.width ), detail::fmt_num( ref->baseline.power_mw[k] ),
                        detail::fmt_num( ref->proposed.power_mw[k] ), detail::fmt_delta( ref->delta_power[k] ) } );
    }
    refs.push_back( { "Energy (PDP)", operation_label( operation_kind::one_full, r.width ), detail::fmt_num( ref->energy_baseline, 4 ),
                      detail::fmt_num( ref->energy_proposed, 4 ), detail::fmt_delta( ref->delta_energy ) } );
    os << detail::render_table( refs );
  }
  return os.str();
}

inline std::string to_csv( comparison_report const& r )
{
  std::ostringstream os;
  auto opt = []( std::optional<double> v ) { return v ? nlohmann::json( *v ).dump() : std::string(); };
  os << "design,operation,applicable,mode,area,depth,toggles_per_cycle,weighted_toggles_per_cycle,pdp,delta_area,delta_depth,delta_power,delta_pdp\n";
  for ( auto const& row : r.rows )
  {
    design_figures fig;
    for ( auto const& d : r.designs )
    {
      if ( d.tag == row.design )
      {
        fig = d;
      }
    }
    os << row.design << "," << row.operation << "," << ( row.applicable ? "1" : "0" ) << "," << row.mode << ","
       << nlohmann::json( fig.area ).dump() << "," << nlohmann::json( fig.depth ).dump() << ",";
    if ( row.applicable )
    {
      os << nlohmann::json( row.power.toggles_per_cycle ).dump() << "," << nlohmann::json( row.power.weighted_per_cycle ).dump() << ","
         << nlohmann::json( row.pdp ).dump();
    }
    else
    {
      os << ",,";
    }
    os << "," << opt( row.delta_area ) << "," << opt( row.delta_depth ) << "," << opt( row.delta_power ) << "," << opt( row.delta_pdp ) << "\n";
  }
  return os.str();
}

} // namespace tpmul
