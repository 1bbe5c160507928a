/*!
  \file placer.hpp
  \brief Row-constrained placement: global, legalization, detailed, buffer rows.
*/

#pragma once

#include <aqflow/cost.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace aqflow
{

struct global_trace_entry
{
  int iteration{ 0 };
  double objective{ 0.0 };
  double gamma{ 0.0 };
  double step{ 0.0 };
  double hpwl{ 0.0 };
};

struct global_place_stats
{
  std::vector<global_trace_entry> trace;
  micron initial_width{ 0 };
  double final_objective{ 0.0 };
};

/*! \brief Thrown when the objective rises for 50 consecutive iterations. */
class divergence_error : public aqflow_error
{
public:
  using aqflow_error::aqflow_error;
};

/*!
  \brief Momentum gradient descent on the relaxed objective, x only.

  Rows are fixed by phase; cells may overlap afterwards.
*/
placement global_place( netlist const& ntk, cell_library const& lib, flow_config const& cfg, global_place_stats* stats = nullptr );

/*! \brief Seeded uniform random x per cell followed by legalization (quality baseline). */
placement random_place( netlist const& ntk, cell_library const& lib, flow_config const& cfg, std::uint64_t seed );

struct legalize_stats
{
  micron displacement{ 0 };
  bool grew{ false };
};

/*!
  \brief Single left-to-right pass per row, keeping x order.

  Each cell goes to the grid position nearest its current x that either
  abuts the previous cell or leaves at least s_min. The layer width is
  then shrunk to the widest row and the pads are re-spread.
*/
placement legalize( placement const& pl, netlist const& ntk, flow_config const& cfg, legalize_stats* stats = nullptr );

/*! \brief Row, spacing and boundary violations as readable messages. */
std::vector<std::string> legality_errors( placement const& pl, netlist const& ntk, flow_config const& cfg );

struct detailed_params
{
  int window{ 3 };
  int passes{ 4 };
  /*! only reorder cells of identical width */
  bool same_size_only{ false };
  /*! restrict to these rows (phases); empty means all */
  std::vector<int> rows;
};

struct detailed_stats
{
  std::size_t windows{ 0 };
  std::size_t accepted{ 0 };
  /*! exact objective after the start and after each accepted move */
  std::vector<double> cost_trace;
};

/*!
  \brief Window reordering with optimal grid positions per ordering.

  Positions come from a shortest-path DP over the grid between the window
  span minus and plus one grid step; only strict improvements are kept.
*/
placement detailed_place( placement const& pl, netlist const& ntk, flow_config const& cfg, detailed_params const& ps,
                          detailed_stats* stats = nullptr );

/*! \brief Defaults from the config (window size and pass count). */
detailed_params detailed_defaults( flow_config const& cfg );

/*!
  \brief Optimal positions for a fixed cell order on one row segment.

  `cost(i, x)` prices cell i at x; positions are grid multiples in
  [lo, hi]; the first cell must respect `left_edge` (right end of the
  left neighbour, or nothing) and the last `right_edge`.
*/
struct window_solution
{
  double cost{ 0.0 };
  std::vector<micron> x;
};
std::optional<window_solution> solve_window( std::vector<micron> const& widths, micron lo, micron hi, std::optional<micron> left_edge,
                                             std::optional<micron> right_edge, micron grid, micron s_min,
                                             std::function<double( std::size_t, micron )> const& cost );

/*! \brief True when b may follow a (right end `a_end`) in a row: abut or leave s_min. */
inline bool spacing_ok( micron a_end, micron b_start, micron s_min )
{
  return b_start == a_end || b_start >= a_end + s_min;
}

struct buffer_row_stats
{
  std::size_t rows_added{ 0 };
  std::size_t buffers_added{ 0 };
  int iterations{ 0 };
};

/*!
  \brief Inserts whole buffer rows into gaps crossed by nets longer than W_max.

  `lengths`, when given, maps net ids to measured (routed) lengths for the
  first round; later rounds use Manhattan pin distances. Throws
  aqflow_error if a single vertical hop already exceeds W_max.
*/
void insert_buffer_rows( placement& pl, netlist& ntk, cell_library const& lib, flow_config const& cfg, buffer_row_stats* stats = nullptr,
                         std::vector<double> const* lengths = nullptr );

/*!
  \brief Grows each channel to the height its horizontal track density needs.

  A channel whose nets overlap d-deep at some x gets at least
  (d + 1) * max(s_min, grid) of vertical space, so placement sees
  roughly the vertical length routing will produce. Gaps never shrink.
  Returns the total added height.
*/
micron reserve_channel_heights( placement& pl, netlist const& ntk, flow_config const& cfg );

/*! \brief Longest Manhattan net length. */
micron max_net_length( placement const& pl, netlist const& ntk );

} // namespace aqflow
