/* Shared fixtures and independent oracles for the unit tests and the acceptance runner. */

#pragma once

#include <aqflow/balance.hpp>
#include <aqflow/flow.hpp>
#include <aqflow/io.hpp>
#include <aqflow/layout.hpp>
#include <aqflow/majsynth.hpp>
#include <aqflow/placer.hpp>
#include <aqflow/router.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace aqflow::test
{

std::string data_path( std::string const& relative );
std::vector<std::string> fixture_names();
netlist load_fixture( std::string const& name );

/*! Fresh scratch directory under the system temp dir (emptied if present). */
std::string scratch_dir( std::string const& name );

/*! Random AOI netlist with at most 12 inputs and 60 gates. */
netlist random_aoi( std::uint64_t seed );

/* stage helpers */

netlist to_majority( netlist const& aoi, cell_library const& lib );
netlist balance( netlist const& maj, cell_library const& lib );

struct pipeline
{
  netlist maj;
  netlist balanced;
  placement pl;
  route_db routes;
  layout lay;
};
/*! synth, balance, place (incl. buffer rows), route and layout, without repair. */
pipeline run_pipeline( netlist const& aoi, cell_library const& lib, flow_config const& cfg );

/* oracles */

/*! Functions of one MAJ3 over {a, b, c, 0, 1} with optional inversions. */
std::set<std::uint8_t> oracle_one_level();
/*! Functions of MAJ3 over three one-level functions with optional inversions. */
std::set<std::uint8_t> oracle_two_level();
/*! Truth table of a mapping evaluated straight from its gate configurations. */
std::uint8_t oracle_mapping_function( maj_mapping const& m );

/*! Longest gate path with inputs at -1 and constants at 0 (max phase + 1). */
int oracle_depth( netlist const& ntk );
/*! Sum over edges of (phase gap - 1) under ASAP phases, outputs padded to the depth. */
std::size_t oracle_buffer_count( netlist const& ntk );

/*! Four-case timing cost, written from the case table with the base clamped at 0. */
double oracle_timing( int phase, double xs, double xe, double layer_width, double alpha );

/*! Dijkstra over (node, layer, run) with the router's rules; cost = length + vias * via cost. */
struct oracle_route
{
  std::int64_t cost{ 0 };
  std::int64_t length{ 0 };
};
std::optional<oracle_route> oracle_shortest_route( channel_grid const& grid, channel_pin const& from, channel_pin const& to, flow_config const& cfg );

/* constructed fixtures */

struct placed_fixture
{
  netlist ntk;
  placement pl;
  flow_config cfg;
  cell_library lib;
};

/*! Widest row packed with MAJ3, AND, BUF; the BUF's consumer sits at the far left. */
placed_fixture make_mixed_size();
/*! Two overlapping nets in channel 1 that one horizontal track cannot hold. */
placed_fixture make_congested();
/*! Two crossing nets of about 2.5 W_max each, pads at their spread positions. */
placed_fixture make_long_net();

/*! Grid nodes (per layer, vias on both) claimed by more than one net. */
std::size_t shared_nodes( route_db const& db, micron grid );

} // namespace aqflow::test
