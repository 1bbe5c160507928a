#include <aqflow/layout.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace aqflow
{

layout generate_layout( placement const& pl, netlist const& ntk, route_db const& routes, flow_config const& cfg )
{
  layout lay;
  lay.model = ntk.model;
  lay.grid_step = pl.grid_step;
  lay.layer_width = pl.layer_width;

  for ( auto const& g : ntk.gates )
  {
    auto const o = pl.cell_origin( ntk, g.id );
    lay.cells.push_back( { "g" + std::to_string( g.id ), pl.kinds[g.id].name, g.id, placement::track_of_phase( g.phase ), o.x, o.y,
                           pl.width( g.id ), pl.height( g.id ), 0 } );
  }
  for ( int t = 0; t < pl.tracks(); ++t )
  {
    lay.rows.push_back( { t, pl.track_top( t ), pl.row_height[t] } );
  }
  for ( std::size_t i = 0; i < ntk.inputs.size(); ++i )
  {
    lay.pads.push_back( { ntk.inputs[i].name, true, ntk.inputs[i].net, { pl.input_x[i], pl.track_bottom( 0 ) } } );
  }
  for ( std::size_t i = 0; i < ntk.outputs.size(); ++i )
  {
    lay.pads.push_back( { ntk.outputs[i].name, false, ntk.outputs[i].net, { pl.output_x[i], pl.track_top( pl.tracks() - 1 ) } } );
  }

  std::map<net_id, routed_net const*> by_net;
  for ( auto const& r : routes.nets )
  {
    by_net[r.net] = &r;
  }
  for ( auto const& n : ntk.nets )
  {
    if ( n.sinks.empty() && !n.primary_output )
      continue;
    int const from_track = net_track( ntk, n.id );
    int const to_track = n.sinks.empty() ? pl.tracks() - 1 : placement::track_of_phase( ntk.gates[n.sinks.front().gate].phase );
    lay.nets.push_back( { n.id, n.name, driver_pin( pl, ntk, n.id ), sink_pin( pl, ntk, n.id ), from_track, to_track } );
    auto const it = by_net.find( n.id );
    if ( it == by_net.end() )
    {
      throw aqflow_error( "net " + n.name + " has no route" );
    }
    for ( auto const& s : it->second->segments )
    {
      lay.wires.push_back( { n.id, it->second->gap, s.layer, s.a, s.b } );
    }
    for ( auto const& v : it->second->vias )
    {
      lay.vias.push_back( { n.id, v } );
    }
  }
  auto const m = cfg.die_margin;
  lay.die = { -m, -m, pl.layer_width + m, pl.die_height() + m };
  return lay;
}

std::string_view to_string( drc_rule rule )
{
  switch ( rule )
  {
  case drc_rule::cell_overlap: return "CellOverlap";
  case drc_rule::cell_spacing: return "CellSpacing";
  case drc_rule::wire_spacing: return "WireSpacing";
  case drc_rule::zigzag_spacing: return "ZigzagSpacing";
  case drc_rule::max_wirelength: return "MaxWirelength";
  case drc_rule::non_adjacent_route: return "NonAdjacentRoute";
  case drc_rule::off_grid: return "OffGrid";
  }
  return "Unknown";
}

std::optional<drc_rule> drc_rule_from_string( std::string_view name )
{
  for ( int r = 0; r <= static_cast<int>( drc_rule::off_grid ); ++r )
  {
    if ( to_string( static_cast<drc_rule>( r ) ) == name )
      return static_cast<drc_rule>( r );
  }
  return std::nullopt;
}

namespace
{

std::string net_ref( net_id n )
{
  return "n" + std::to_string( n );
}

/* Chebyshev distance between two axis-aligned segments */
micron segment_distance( layout_wire const& a, layout_wire const& b )
{
  auto const ax0 = std::min( a.a.x, a.b.x ), ax1 = std::max( a.a.x, a.b.x );
  auto const ay0 = std::min( a.a.y, a.b.y ), ay1 = std::max( a.a.y, a.b.y );
  auto const bx0 = std::min( b.a.x, b.b.x ), bx1 = std::max( b.a.x, b.b.x );
  auto const by0 = std::min( b.a.y, b.b.y ), by1 = std::max( b.a.y, b.b.y );
  auto const dx = std::max<micron>( 0, std::max( ax0, bx0 ) - std::min( ax1, bx1 ) );
  auto const dy = std::max<micron>( 0, std::max( ay0, by0 ) - std::min( ay1, by1 ) );
  return std::max( dx, dy );
}

void check_cells( layout const& lay, flow_config const& cfg, std::vector<drc_violation>& out )
{
  std::vector<std::size_t> order( lay.cells.size() );
  for ( std::size_t i = 0; i < order.size(); ++i )
    order[i] = i;
  std::sort( order.begin(), order.end(), [&]( auto a, auto b ) { return std::pair{ lay.cells[a].x, a } < std::pair{ lay.cells[b].x, b }; } );
  for ( std::size_t i = 0; i < order.size(); ++i )
  {
    auto const& a = lay.cells[order[i]];
    for ( std::size_t j = i + 1; j < order.size(); ++j )
    {
      auto const& b = lay.cells[order[j]];
      if ( b.x >= a.x + a.width + cfg.s_min )
        break;
      bool const y_overlap = std::max( a.y, b.y ) < std::min( a.y + a.height, b.y + b.height );
      if ( !y_overlap )
        continue;
      auto const& left = a.x <= b.x ? a : b;
      auto const& right = a.x <= b.x ? b : a;
      auto const gap = right.x - ( left.x + left.width );
      std::vector<std::string> objs{ left.name, right.name };
      if ( gap < 0 )
        out.push_back( { drc_rule::cell_overlap, { right.x, right.y }, objs, static_cast<double>( -gap ), 0.0 } );
      else if ( gap > 0 && gap < cfg.s_min )
        out.push_back( { drc_rule::cell_spacing, { left.x + left.width, right.y }, objs, static_cast<double>( gap ),
                         static_cast<double>( cfg.s_min ) } );
    }
  }
}

void check_wires( layout const& lay, flow_config const& cfg, std::vector<drc_violation>& out )
{
  std::vector<std::size_t> order( lay.wires.size() );
  for ( std::size_t i = 0; i < order.size(); ++i )
    order[i] = i;
  auto const x0 = [&]( std::size_t i ) { return std::min( lay.wires[i].a.x, lay.wires[i].b.x ); };
  auto const x1 = [&]( std::size_t i ) { return std::max( lay.wires[i].a.x, lay.wires[i].b.x ); };
  std::sort( order.begin(), order.end(), [&]( auto a, auto b ) { return std::pair{ x0( a ), a } < std::pair{ x0( b ), b }; } );
  for ( std::size_t i = 0; i < order.size(); ++i )
  {
    auto const& a = lay.wires[order[i]];
    for ( std::size_t j = i + 1; j < order.size(); ++j )
    {
      auto const& b = lay.wires[order[j]];
      if ( x0( order[j] ) >= x1( order[i] ) + cfg.s_min )
        break;
      if ( a.net == b.net || a.layer != b.layer )
        continue;
      auto const d = segment_distance( a, b );
      if ( d < cfg.s_min )
      {
        auto const lo = std::min( a.net, b.net ), hi = std::max( a.net, b.net );
        point const at{ std::max( std::min( a.a.x, a.b.x ), std::min( b.a.x, b.b.x ) ), std::max( std::min( a.a.y, a.b.y ), std::min( b.a.y, b.b.y ) ) };
        out.push_back( { drc_rule::wire_spacing, at, { net_ref( lo ), net_ref( hi ), "layer" + std::to_string( a.layer ) }, static_cast<double>( d ),
                         static_cast<double>( cfg.s_min ) } );
      }
    }
  }

  std::map<net_id, micron> length;
  std::map<net_id, point> first;
  for ( auto const& w : lay.wires )
  {
    if ( w.length() < cfg.s_min )
    {
      out.push_back( { drc_rule::zigzag_spacing, w.a, { net_ref( w.net ) }, static_cast<double>( w.length() ), static_cast<double>( cfg.s_min ) } );
    }
    length[w.net] += w.length();
    first.try_emplace( w.net, w.a );
  }
  for ( auto const& [n, l] : length )
  {
    if ( l > cfg.w_max )
    {
      out.push_back( { drc_rule::max_wirelength, first[n], { net_ref( n ) }, static_cast<double>( l ), static_cast<double>( cfg.w_max ) } );
    }
  }

  /* channel confinement */
  std::map<net_id, layout_net const*> nets;
  for ( auto const& n : lay.nets )
    nets[n.id] = &n;
  auto const bottom = [&]( int t ) -> std::optional<micron> {
    if ( t < 0 || static_cast<std::size_t>( t ) >= lay.rows.size() )
      return std::nullopt;
    return lay.rows[t].y + lay.rows[t].height;
  };
  for ( auto const& n : lay.nets )
  {
    if ( n.to_track != n.from_track + 1 )
    {
      out.push_back( { drc_rule::non_adjacent_route, n.from, { net_ref( n.id ) }, static_cast<double>( n.to_track - n.from_track ), 1.0 } );
    }
  }
  for ( auto const& w : lay.wires )
  {
    auto const it = nets.find( w.net );
    int const gap = it == nets.end() ? w.gap : it->second->from_track;
    auto const top = bottom( gap ), end = bottom( gap + 1 );
    auto const y0 = std::min( w.a.y, w.b.y ), y1 = std::max( w.a.y, w.b.y );
    if ( w.gap != gap || !top || !end || y0 < *top || y1 > *end )
    {
      out.push_back( { drc_rule::non_adjacent_route, w.a, { net_ref( w.net ) }, static_cast<double>( w.gap ), static_cast<double>( gap ) } );
    }
  }
}

void check_grid( layout const& lay, std::vector<drc_violation>& out )
{
  auto const g = lay.grid_step;
  auto const on = [g]( point p ) { return p.x % g == 0 && p.y % g == 0; };
  auto const flag = [&]( point p, std::string obj ) {
    out.push_back( { drc_rule::off_grid, p, { std::move( obj ) }, static_cast<double>( p.x % g != 0 ? p.x : p.y ), static_cast<double>( g ) } );
  };
  for ( auto const& c : lay.cells )
  {
    if ( !on( { c.x, c.y } ) )
      flag( { c.x, c.y }, c.name );
  }
  for ( auto const& w : lay.wires )
  {
    if ( !on( w.a ) )
      flag( w.a, net_ref( w.net ) );
    if ( !on( w.b ) )
      flag( w.b, net_ref( w.net ) );
  }
  for ( auto const& v : lay.vias )
  {
    if ( !on( v.at ) )
      flag( v.at, net_ref( v.net ) );
  }
}

} // namespace

std::vector<drc_violation> run_drc( layout const& lay, flow_config const& cfg )
{
  std::vector<drc_violation> out;
  check_cells( lay, cfg, out );
  check_wires( lay, cfg, out );
  check_grid( lay, out );
  std::sort( out.begin(), out.end(), []( auto const& a, auto const& b ) {
    return std::tie( a.rule, a.at.y, a.at.x, a.objects, a.measured ) < std::tie( b.rule, b.at.y, b.at.x, b.objects, b.measured );
  } );
  out.erase( std::unique( out.begin(), out.end() ), out.end() );
  return out;
}

repair_result repair( layout const& lay, std::vector<drc_violation> const& violations, placement& pl, netlist& ntk, route_db& routes,
                      cell_library const& lib, flow_config const& cfg )
{
  repair_result res;
  res.result = lay;
  res.unrepaired = violations;
  while ( !res.unrepaired.empty() && res.iterations < cfg.repair_iterations )
  {
    std::set<drc_rule> rules;
    std::set<int> gaps;
    for ( auto const& v : res.unrepaired )
    {
      rules.insert( v.rule );
      if ( v.rule == drc_rule::wire_spacing || v.rule == drc_rule::zigzag_spacing )
      {
        for ( auto const& w : res.result.wires )
        {
          if ( !v.objects.empty() && net_ref( w.net ) == v.objects.front() )
            gaps.insert( w.gap );
        }
      }
    }
    bool const repairable = rules.count( drc_rule::max_wirelength ) || rules.count( drc_rule::cell_overlap ) || rules.count( drc_rule::cell_spacing ) ||
                            rules.count( drc_rule::wire_spacing ) || rules.count( drc_rule::zigzag_spacing );
    if ( !repairable )
    {
      break;
    }
    ++res.iterations;
    if ( rules.count( drc_rule::cell_overlap ) || rules.count( drc_rule::cell_spacing ) )
    {
      pl = legalize( pl, ntk, cfg );
    }
    if ( rules.count( drc_rule::max_wirelength ) )
    {
      auto const lengths = routes.lengths( ntk.nets.size() );
      buffer_row_stats st;
      insert_buffer_rows( pl, ntk, lib, cfg, &st, &lengths );
      res.buffer_rows_added += st.rows_added;
    }
    for ( auto const g : gaps )
    {
      if ( g >= 0 && static_cast<std::size_t>( g ) < pl.channel_gap.size() )
        pl.channel_gap[g] += cfg.s_min;
    }
    routes = route_all( pl, ntk, cfg );
    res.result = generate_layout( pl, ntk, routes, cfg );
    res.unrepaired = run_drc( res.result, cfg );
  }
  return res;
}

} // namespace aqflow
