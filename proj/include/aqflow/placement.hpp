/*!
  \file placement.hpp
  \brief Row geometry and cell coordinates.

  Tracks stack from the top of the die, y grows downward. Track 0 holds
  the primary-input pads (height 0), track p + 1 holds the gates of phase
  p, and the last track holds the primary-output pads. Cells sit on the
  bottom line of their track; input pins face up, output pins face down.
*/

#pragma once

#include <aqflow/core.hpp>

#include <vector>

namespace aqflow
{

struct point
{
  micron x{ 0 };
  micron y{ 0 };

  friend bool operator==( point const&, point const& ) = default;
  friend auto operator<=>( point const&, point const& ) = default;
};

struct placement
{
  micron grid_step{ 10 };
  /*! number of gate phases */
  int depth{ 0 };
  /*! left edge per gate */
  std::vector<micron> x;
  /*! library geometry per gate */
  std::vector<cell_kind> kinds;
  /*! per track, size depth + 2 */
  std::vector<micron> row_height;
  /*! channel_gap[t] separates track t from track t + 1; size depth + 1 */
  std::vector<micron> channel_gap;
  /*! current row extent */
  micron layer_width{ 0 };
  std::vector<micron> input_x;
  std::vector<micron> output_x;
  /*! set when legalization had to grow the layer width */
  bool overflow{ false };

  int tracks() const { return depth + 2; }
  static int track_of_phase( int phase ) { return phase + 1; }

  micron track_top( int t ) const;
  micron track_bottom( int t ) const { return track_top( t ) + row_height.at( t ); }
  micron die_height() const { return track_bottom( tracks() - 1 ); }

  micron width( gate_id g ) const { return kinds[g].width; }
  micron height( gate_id g ) const { return kinds[g].height; }
  /*! top-left corner of a gate's cell */
  point cell_origin( netlist const& ntk, gate_id g ) const;

  friend bool operator==( placement const&, placement const& ) = default;
};

/*! \brief Empty placement with rows sized for `ntk` (x = 0 everywhere). */
placement make_placement( netlist const& ntk, cell_library const& lib, flow_config const& cfg );

/*! \brief Position of the pin driving net `n` (gate output or input pad). */
point driver_pin( placement const& pl, netlist const& ntk, net_id n );

/*! \brief Position of the single consumer pin of `n` (gate input or output pad). */
point sink_pin( placement const& pl, netlist const& ntk, net_id n );

/*! \brief Track whose bottom line the net leaves from. */
int net_track( netlist const& ntk, net_id n );

/*! \brief Spreads the I/O pads evenly over [0, layer_width] on the grid. */
void spread_pads( placement& pl );

/*! \brief Gates of each phase sorted by (x, id). */
std::vector<std::vector<gate_id>> rows_by_x( placement const& pl, netlist const& ntk );

/*! \brief Sum of exact Manhattan driver-to-sink lengths. */
micron hpwl( placement const& pl, netlist const& ntk );

} // namespace aqflow
