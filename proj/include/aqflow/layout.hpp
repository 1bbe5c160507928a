/*!
  \file layout.hpp
  \brief Absolute-coordinate layout assembly and geometric design-rule checks.
*/

#pragma once

#include <aqflow/placer.hpp>
#include <aqflow/router.hpp>

#include <string>
#include <vector>

namespace aqflow
{

struct layout_cell
{
  std::string name;
  std::string kind;
  gate_id gate{ invalid_id };
  int row{ 0 };
  micron x{ 0 };
  micron y{ 0 };
  micron width{ 0 };
  micron height{ 0 };
  /*! 0 or 180 degrees */
  int rotation{ 0 };

  friend bool operator==( layout_cell const&, layout_cell const& ) = default;
};

struct layout_wire
{
  net_id net{ invalid_id };
  int gap{ 0 };
  int layer{ 0 };
  point a;
  point b;

  micron length() const { return std::abs( b.x - a.x ) + std::abs( b.y - a.y ); }
  friend bool operator==( layout_wire const&, layout_wire const& ) = default;
};

struct layout_via
{
  net_id net{ invalid_id };
  point at;

  friend bool operator==( layout_via const&, layout_via const& ) = default;
};

struct layout_row
{
  int track{ 0 };
  micron y{ 0 };
  micron height{ 0 };

  friend bool operator==( layout_row const&, layout_row const& ) = default;
};

struct layout_pad
{
  std::string name;
  bool input{ true };
  net_id net{ invalid_id };
  point at;

  friend bool operator==( layout_pad const&, layout_pad const& ) = default;
};

struct layout_net
{
  net_id id{ invalid_id };
  std::string name;
  point from;
  point to;
  int from_track{ 0 };
  int to_track{ 0 };

  friend bool operator==( layout_net const&, layout_net const& ) = default;
};

struct box
{
  micron x0{ 0 };
  micron y0{ 0 };
  micron x1{ 0 };
  micron y1{ 0 };

  friend bool operator==( box const&, box const& ) = default;
};

struct layout
{
  std::string model;
  micron grid_step{ 10 };
  micron layer_width{ 0 };
  box die;
  std::vector<layout_cell> cells;
  std::vector<layout_wire> wires;
  std::vector<layout_via> vias;
  std::vector<layout_row> rows;
  std::vector<layout_pad> pads;
  std::vector<layout_net> nets;

  friend bool operator==( layout const&, layout const& ) = default;
};

/*! \brief Builds the layout; throws aqflow_error if a consumed net has no route. */
layout generate_layout( placement const& pl, netlist const& ntk, route_db const& routes, flow_config const& cfg );

enum class drc_rule
{
  cell_overlap,
  cell_spacing,
  wire_spacing,
  zigzag_spacing,
  max_wirelength,
  non_adjacent_route,
  off_grid
};

std::string_view to_string( drc_rule rule );
std::optional<drc_rule> drc_rule_from_string( std::string_view name );

struct drc_violation
{
  drc_rule rule{ drc_rule::off_grid };
  point at;
  /*! involved objects, e.g. "g3", "n7" */
  std::vector<std::string> objects;
  double measured{ 0.0 };
  double required{ 0.0 };

  friend bool operator==( drc_violation const&, drc_violation const& ) = default;
};

/*! \brief Evaluates every rule; findings sorted by (rule, y, x, objects). */
std::vector<drc_violation> run_drc( layout const& lay, flow_config const& cfg );

struct repair_result
{
  layout result;
  std::vector<drc_violation> unrepaired;
  int iterations{ 0 };
  std::size_t buffer_rows_added{ 0 };
};

/*!
  \brief DRC-driven repair loop, at most cfg.repair_iterations rounds.

  MaxWirelength inserts buffer rows, spacing and zigzag findings widen the
  affected channels, cell findings re-legalize; the design is then rerouted
  and checked again. OffGrid and NonAdjacentRoute cannot be repaired and
  stop the loop when nothing else remains.
*/
repair_result repair( layout const& lay, std::vector<drc_violation> const& violations, placement& pl, netlist& ntk, route_db& routes,
                      cell_library const& lib, flow_config const& cfg );

} // namespace aqflow
