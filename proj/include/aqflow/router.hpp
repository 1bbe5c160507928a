/*!
  \file router.hpp
  \brief Channel-by-channel A* routing on two metal layers.

  Layer 0 carries horizontal segments and layer 1 vertical ones, so every
  bend is a via. A segment must reach s_min before the wire may bend.
  When a channel cannot hold all of its nets it is made one s_min taller
  and rerouted; rows below it move down, nothing else changes.
*/

#pragma once

#include <aqflow/placement.hpp>

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace aqflow
{

struct wire_segment
{
  point a;
  point b;
  int layer{ 0 };

  micron length() const { return std::abs( b.x - a.x ) + std::abs( b.y - a.y ); }
  friend bool operator==( wire_segment const&, wire_segment const& ) = default;
};

struct routed_net
{
  net_id net{ invalid_id };
  int gap{ 0 };
  std::vector<wire_segment> segments;
  std::vector<point> vias;
  micron length{ 0 };

  friend bool operator==( routed_net const&, routed_net const& ) = default;
};

struct route_db
{
  /*! sorted by net id */
  std::vector<routed_net> nets;
  /*! expansions applied to each channel */
  std::vector<int> expansions;
  micron total_length{ 0 };

  /*! routed length per net id (0 for unrouted ids) */
  std::vector<double> lengths( std::size_t net_count ) const;
  int total_expansions() const;
};

/*! \brief Node ownership values besides net ids. */
inline constexpr std::uint32_t node_free = invalid_id;
inline constexpr std::uint32_t node_blocked = invalid_id - 1;

struct channel_pin
{
  net_id net{ invalid_id };
  point at;
  /*! node the pin attaches to (nearest column, lower on a tie) */
  int col{ 0 };
  int row{ 0 };
};

struct channel_grid
{
  int gap{ 0 };
  micron grid{ 10 };
  micron y0{ 0 };
  int cols{ 0 };
  int rows{ 0 };
  /*! per layer, per node: node_free, node_blocked or the owning net */
  std::vector<std::uint32_t> owner[2];
  /*! spacing halo per layer when grid_step < s_min */
  std::vector<std::uint32_t> halo[2];
  /*! per routed net in this gap: driver pin then sink pin */
  std::vector<std::pair<channel_pin, channel_pin>> pins;

  int node( int col, int row ) const { return row * cols + col; }
  point position( int col, int row ) const { return { static_cast<micron>( col ) * grid, y0 + static_cast<micron>( row ) * grid }; }
  bool usable( int layer, int n, net_id net ) const
  {
    auto const o = owner[layer][n];
    if ( o == net )
      return true;
    auto const h = halo[layer][n];
    return o == node_free && ( h == node_free || h == net );
  }
};

/*! \brief Grid of the channel below track `gap`, with cells blocked and pins reserved. */
channel_grid build_channel_grid( placement const& pl, netlist const& ntk, int gap, flow_config const& cfg );

/*! \brief Minimum-cost path (length + via cost) between two pins; nothing if unroutable. */
std::optional<routed_net> route_net( channel_grid const& grid, channel_pin const& from, channel_pin const& to, flow_config const& cfg );

/*! \brief Marks a routed net on the grid (and its spacing halo). */
void commit_route( channel_grid& grid, routed_net const& r, flow_config const& cfg );

class unroutable_error : public aqflow_error
{
public:
  unroutable_error( std::string const& what, int gap, std::vector<std::string> map )
      : aqflow_error( what ), gap( gap ), congestion( std::move( map ) )
  {
  }

  int gap;
  /*! one string per grid row: '.' free, '#' blocked, 'h'/'v' one layer used, '+' both */
  std::vector<std::string> congestion;
};

std::vector<std::string> congestion_map( channel_grid const& grid );

/*!
  \brief Routes every net leaving track `gap`, shortest first.

  On failure the channel grows by s_min and all its nets are rerouted,
  at most cfg.max_expansions times. `pl.channel_gap` is updated in place.
*/
std::vector<routed_net> route_layer( placement& pl, netlist const& ntk, int gap, flow_config const& cfg, int* expansions = nullptr );

route_db route_all( placement& pl, netlist const& ntk, flow_config const& cfg );

} // namespace aqflow
