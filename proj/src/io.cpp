#include <aqflow/io.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <functional>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace aqflow
{

namespace
{

struct token
{
  std::string_view text;
  int column{ 1 };
};

/* splits a line into whitespace-separated tokens, dropping a trailing # comment */
std::vector<token> tokenize( std::string_view line )
{
  std::vector<token> out;
  std::size_t i = 0;
  while ( i < line.size() )
  {
    while ( i < line.size() && ( line[i] == ' ' || line[i] == '\t' || line[i] == '\r' ) )
      ++i;
    if ( i >= line.size() || line[i] == '#' )
      break;
    auto const start = i;
    while ( i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#' )
      ++i;
    out.push_back( { line.substr( start, i - start ), static_cast<int>( start ) + 1 } );
  }
  return out;
}

template<typename F>
void for_each_line( std::string_view text, F&& f )
{
  int line_no = 0;
  std::size_t pos = 0;
  while ( pos <= text.size() )
  {
    auto const nl = text.find( '\n', pos );
    auto const end = nl == std::string_view::npos ? text.size() : nl;
    ++line_no;
    f( line_no, text.substr( pos, end - pos ) );
    if ( nl == std::string_view::npos )
      break;
    pos = nl + 1;
  }
}

bool is_identifier( std::string_view s )
{
  if ( s.empty() || !( std::isalpha( static_cast<unsigned char>( s[0] ) ) || s[0] == '_' ) )
    return false;
  return std::all_of( s.begin(), s.end(), []( char c ) {
    return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' || c == '[' || c == ']' || c == '.';
  } );
}

template<typename T>
std::optional<T> parse_number( std::string_view s )
{
  T v{};
  auto const [p, ec] = std::from_chars( s.data(), s.data() + s.size(), v );
  if ( ec != std::errc{} || p != s.data() + s.size() )
    return std::nullopt;
  return v;
}

std::optional<double> parse_double( std::string_view s )
{
  if ( s.empty() )
    return std::nullopt;
  std::string const copy( s );
  std::size_t used = 0;
  try
  {
    double const v = std::stod( copy, &used );
    if ( used != copy.size() )
      return std::nullopt;
    return v;
  }
  catch ( std::exception const& )
  {
    return std::nullopt;
  }
}

std::optional<gate_type> aoi_keyword( std::string_view k )
{
  static constexpr std::pair<std::string_view, gate_type> table[] = {
      { "AND", gate_type::and2 },   { "OR", gate_type::or2 },     { "NOT", gate_type::inv },  { "NAND", gate_type::nand2 },
      { "NOR", gate_type::nor2 },   { "XOR", gate_type::xor2 },   { "XNOR", gate_type::xnor2 }, { "BUF", gate_type::buf } };
  for ( auto const& [name, t] : table )
    if ( name == k )
      return t;
  return std::nullopt;
}

} // namespace

/* netlist text */

netlist parse_netlist( std::string_view text )
{
  struct gate_line
  {
    gate_type type;
    token out;
    std::vector<token> ins;
    int line;
  };
  std::string model;
  std::vector<token> inputs, outputs;
  std::vector<int> input_lines, output_lines;
  std::vector<gate_line> gates;
  bool seen_model = false, seen_end = false;
  int last_line = 1;

  for_each_line( text, [&]( int ln, std::string_view line ) {
    auto const toks = tokenize( line );
    if ( toks.empty() )
      return;
    last_line = ln;
    if ( seen_end )
      throw parse_error( "content after .end", ln, toks[0].column );
    auto const& head = toks[0];
    if ( head.text == ".model" )
    {
      if ( seen_model )
        throw parse_error( "duplicate .model", ln, head.column );
      if ( toks.size() != 2 || !is_identifier( toks[1].text ) )
        throw parse_error( ".model expects one identifier", ln, toks.size() > 1 ? toks[1].column : head.column );
      model = toks[1].text;
      seen_model = true;
    }
    else if ( head.text == ".inputs" || head.text == ".outputs" )
    {
      for ( std::size_t i = 1; i < toks.size(); ++i )
      {
        if ( !is_identifier( toks[i].text ) )
          throw parse_error( "invalid identifier '" + std::string( toks[i].text ) + "'", ln, toks[i].column );
        ( head.text == ".inputs" ? inputs : outputs ).push_back( toks[i] );
        ( head.text == ".inputs" ? input_lines : output_lines ).push_back( ln );
      }
    }
    else if ( head.text == ".end" )
    {
      if ( toks.size() != 1 )
        throw parse_error( "unexpected token after .end", ln, toks[1].column );
      seen_end = true;
    }
    else if ( head.text.starts_with( '.' ) )
    {
      throw parse_error( "unknown directive '" + std::string( head.text ) + "'", ln, head.column );
    }
    else
    {
      auto const type = aoi_keyword( head.text );
      if ( !type )
        throw parse_error( "unknown gate kind '" + std::string( head.text ) + "'", ln, head.column );
      if ( toks.size() < 2 )
        throw parse_error( "gate needs an output signal", ln, head.column + static_cast<int>( head.text.size() ) );
      for ( std::size_t i = 1; i < toks.size(); ++i )
        if ( !is_identifier( toks[i].text ) )
          throw parse_error( "invalid identifier '" + std::string( toks[i].text ) + "'", ln, toks[i].column );
      auto const arity = static_cast<std::size_t>( gate_arity( *type ) );
      if ( toks.size() - 2 != arity )
      {
        auto const col = toks.size() - 2 > arity ? toks[2 + arity].column : toks.back().column + static_cast<int>( toks.back().text.size() );
        throw parse_error( std::string( head.text ) + " takes " + std::to_string( arity ) + " input(s), got " + std::to_string( toks.size() - 2 ), ln,
                           col );
      }
      gates.push_back( { *type, toks[1], { toks.begin() + 2, toks.end() }, ln } );
    }
  } );
  if ( !seen_end )
    throw parse_error( "missing .end", last_line, 1 );

  netlist ntk;
  ntk.model = seen_model ? model : "top";
  std::map<std::string, net_id, std::less<>> signal;
  for ( std::size_t i = 0; i < inputs.size(); ++i )
  {
    if ( signal.count( inputs[i].text ) )
      throw parse_error( "duplicate input '" + std::string( inputs[i].text ) + "'", input_lines[i], inputs[i].column );
    signal.emplace( std::string( inputs[i].text ), ntk.add_input( std::string( inputs[i].text ) ) );
  }
  for ( auto const& g : gates )
  {
    if ( signal.count( g.out.text ) )
      throw parse_error( "signal '" + std::string( g.out.text ) + "' has more than one driver", g.line, g.out.column );
    signal.emplace( std::string( g.out.text ), ntk.add_net( std::string( g.out.text ) ) );
  }
  for ( auto const& g : gates )
  {
    std::vector<net_id> fanin;
    for ( auto const& in : g.ins )
    {
      auto const it = signal.find( in.text );
      if ( it == signal.end() )
        throw parse_error( "undeclared signal '" + std::string( in.text ) + "'", g.line, in.column );
      fanin.push_back( it->second );
    }
    ntk.add_gate( g.type, std::move( fanin ), { signal.at( std::string( g.out.text ) ) } );
  }
  std::set<std::string, std::less<>> seen_outputs;
  for ( std::size_t i = 0; i < outputs.size(); ++i )
  {
    auto const& o = outputs[i];
    if ( !seen_outputs.insert( std::string( o.text ) ).second )
      throw parse_error( "duplicate output '" + std::string( o.text ) + "'", output_lines[i], o.column );
    auto const it = signal.find( o.text );
    if ( it == signal.end() )
      throw parse_error( "undeclared signal '" + std::string( o.text ) + "'", output_lines[i], o.column );
    ntk.add_output( std::string( o.text ), it->second );
  }
  /* Kahn's algorithm; whatever is left sits on or below a cycle */
  std::vector<std::size_t> pending( ntk.gates.size(), 0 );
  std::vector<gate_id> ready;
  for ( auto const& g : ntk.gates )
  {
    for ( auto const n : g.fanin )
      pending[g.id] += ntk.nets[n].driver.has_value();
    if ( pending[g.id] == 0 )
      ready.push_back( g.id );
  }
  std::size_t done = 0;
  while ( !ready.empty() )
  {
    auto const g = ready.back();
    ready.pop_back();
    ++done;
    for ( auto const n : ntk.gates[g].fanout )
      for ( auto const& s : ntk.nets[n].sinks )
        if ( --pending[s.gate] == 0 )
          ready.push_back( s.gate );
  }
  if ( done != ntk.gates.size() )
  {
    /* peel off gates that only feed the cycle from below, then report the earliest gate left */
    std::vector<bool> left( ntk.gates.size() );
    for ( auto const& g : ntk.gates )
      left[g.id] = pending[g.id] > 0;
    for ( bool changed = true; changed; )
    {
      changed = false;
      for ( auto const& g : ntk.gates )
      {
        if ( !left[g.id] )
          continue;
        bool feeds = false;
        for ( auto const n : g.fanout )
          for ( auto const& s : ntk.nets[n].sinks )
            feeds = feeds || left[s.gate];
        if ( !feeds )
        {
          left[g.id] = false;
          changed = true;
        }
      }
    }
    auto const first = static_cast<std::size_t>( std::find( left.begin(), left.end(), true ) - left.begin() );
    auto const& g = gates[first];
    throw parse_error( "combinational cycle through '" + std::string( g.out.text ) + "'", g.line, g.out.column );
  }
  return ntk;
}

std::string write_netlist( netlist const& ntk )
{
  std::ostringstream os;
  os << ".model " << ntk.model << "\n.inputs";
  for ( auto const& p : ntk.inputs )
    os << ' ' << p.name;
  os << "\n.outputs";
  for ( auto const& p : ntk.outputs )
    os << ' ' << ntk.nets[p.net].name;
  os << '\n';
  for ( auto const& g : ntk.gates )
  {
    if ( !is_aoi_type( g.type ) )
      throw aqflow_error( "write_netlist: gate g" + std::to_string( g.id ) + " is not an AOI gate" );
    os << gate_keyword( g.type ) << ' ' << ntk.nets[g.fanout[0]].name;
    for ( auto const n : g.fanin )
      os << ' ' << ntk.nets[n].name;
    os << '\n';
  }
  os << ".end\n";
  return os.str();
}

/* cell library */

cell_library parse_cell_library( std::string_view text )
{
  cell_library lib;
  std::optional<cell_kind> cur;
  int cur_line = 0;
  bool has_function = false;
  int last_line = 1;

  auto const finish = [&]( int ln ) {
    auto& k = *cur;
    if ( k.width <= 0 || k.height <= 0 )
      throw parse_error( "cell " + k.name + " needs a positive size", cur_line, 1 );
    if ( k.jj_count < 2 )
      throw parse_error( "cell " + k.name + " needs at least 2 JJs", cur_line, 1 );
    if ( !has_function )
      throw parse_error( "cell " + k.name + " has no function", ln, 1 );
    if ( static_cast<int>( k.pins.size() ) != k.inputs + k.outputs )
      throw parse_error( "cell " + k.name + " needs " + std::to_string( k.inputs + k.outputs ) + " pins", ln, 1 );
    if ( k.is_splitter() ? ( k.inputs != 1 || k.outputs < 2 || k.outputs > 4 ) : k.outputs != 1 )
      throw parse_error( "cell " + k.name + " has an invalid pin count", ln, 1 );
    if ( k.inputs < 0 || k.inputs > 3 )
      throw parse_error( "cell " + k.name + " has an invalid input count", ln, 1 );
    for ( int i = 0; i < k.inputs + k.outputs; ++i )
    {
      auto const& p = k.pins[i];
      if ( p.dx < 0 || p.dx > k.width || p.dy != ( i < k.inputs ? 0 : k.height ) )
        throw parse_error( "cell " + k.name + " pin " + std::to_string( i ) + " is not on its edge", ln, 1 );
    }
    try
    {
      lib.add( std::move( k ) );
    }
    catch ( aqflow_error const& e )
    {
      throw parse_error( e.what(), cur_line, 1 );
    }
    cur.reset();
  };

  for_each_line( text, [&]( int ln, std::string_view line ) {
    last_line = ln;
    auto const t = tokenize( line );
    if ( t.empty() )
      return;
    auto const need = [&]( std::size_t n ) {
      if ( t.size() != n + 1 )
        throw parse_error( std::string( t[0].text ) + " expects " + std::to_string( n ) + " value(s)", ln, t[0].column );
    };
    auto const integer = [&]( std::size_t i ) {
      auto const v = parse_number<long long>( t[i].text );
      if ( !v )
        throw parse_error( "expected an integer", ln, t[i].column );
      return *v;
    };
    if ( t[0].text == "cell" )
    {
      if ( cur )
        throw parse_error( "missing end before new cell", ln, t[0].column );
      need( 1 );
      cur = cell_kind{};
      cur->name = t[1].text;
      cur_line = ln;
      has_function = false;
      return;
    }
    if ( !cur )
      throw parse_error( "expected 'cell'", ln, t[0].column );
    if ( t[0].text == "end" )
    {
      need( 0 );
      finish( ln );
    }
    else if ( t[0].text == "inputs" )
    {
      need( 1 );
      cur->inputs = static_cast<int>( integer( 1 ) );
    }
    else if ( t[0].text == "outputs" )
    {
      need( 1 );
      cur->outputs = static_cast<int>( integer( 1 ) );
    }
    else if ( t[0].text == "size" )
    {
      need( 2 );
      cur->width = integer( 1 );
      cur->height = integer( 2 );
      if ( cur->width <= 0 || cur->height <= 0 )
        throw parse_error( "size must be positive", ln, t[1].column );
    }
    else if ( t[0].text == "jj" )
    {
      need( 1 );
      cur->jj_count = static_cast<int>( integer( 1 ) );
    }
    else if ( t[0].text == "pin" )
    {
      need( 2 );
      cur->pins.push_back( { integer( 1 ), integer( 2 ) } );
    }
    else if ( t[0].text == "function" )
    {
      need( 1 );
      has_function = true;
      if ( t[1].text == "splitter" )
      {
        cur->function.reset();
      }
      else
      {
        if ( t[1].text.size() != 8 || t[1].text.find_first_not_of( "01" ) != std::string_view::npos )
          throw parse_error( "truth table must be 8 binary digits", ln, t[1].column );
        std::uint8_t f = 0;
        for ( auto const c : t[1].text )
          f = static_cast<std::uint8_t>( ( f << 1 ) | ( c == '1' ? 1 : 0 ) );
        cur->function = f;
      }
    }
    else
    {
      throw parse_error( "unknown key '" + std::string( t[0].text ) + "'", ln, t[0].column );
    }
  } );
  if ( cur )
    throw parse_error( "cell " + cur->name + " is missing 'end'", last_line, 1 );
  for ( auto const* name : { "BUF", "INV", "MAJ3", "AND", "OR", "SPL2", "CONST0", "CONST1" } )
  {
    if ( !lib.find( name ) )
      throw parse_error( std::string( "missing mandatory cell kind " ) + name, last_line, 1 );
  }
  return lib;
}

std::string write_cell_library( cell_library const& lib )
{
  std::ostringstream os;
  for ( auto const& k : lib.kinds() )
  {
    os << "cell " << k.name << "\n  inputs " << k.inputs << "\n  outputs " << k.outputs << "\n  size " << k.width << ' ' << k.height << "\n  jj "
       << k.jj_count << '\n';
    for ( auto const& p : k.pins )
      os << "  pin " << p.dx << ' ' << p.dy << '\n';
    os << "  function ";
    if ( k.function )
    {
      for ( int b = 7; b >= 0; --b )
        os << ( ( *k.function >> b ) & 1 );
    }
    else
    {
      os << "splitter";
    }
    os << "\nend\n\n";
  }
  return os.str();
}

/* config */

namespace
{

struct config_field
{
  std::string_view key;
  std::function<bool( flow_config&, std::string_view )> set;
  std::function<std::string( flow_config const& )> get;
};

template<typename T>
config_field field( std::string_view key, T flow_config::*member )
{
  config_field f;
  f.key = key;
  f.set = [member]( flow_config& c, std::string_view v ) {
    if constexpr ( std::is_floating_point_v<T> )
    {
      auto const d = parse_double( v );
      if ( !d )
        return false;
      c.*member = *d;
    }
    else
    {
      auto const n = parse_number<T>( v );
      if ( !n )
        return false;
      c.*member = *n;
    }
    return true;
  };
  f.get = [member]( flow_config const& c ) {
    std::ostringstream os;
    os << c.*member;
    return os.str();
  };
  return f;
}

std::vector<config_field> const& config_fields()
{
  static std::vector<config_field> const fields = {
      field( "lambda_t", &flow_config::lambda_t ),
      field( "lambda_w", &flow_config::lambda_w ),
      field( "w_max", &flow_config::w_max ),
      field( "s_min", &flow_config::s_min ),
      field( "alpha", &flow_config::alpha ),
      field( "gamma", &flow_config::gamma ),
      field( "target_clock_ghz", &flow_config::target_clock_ghz ),
      field( "grid_step", &flow_config::grid_step ),
      field( "max_expansions", &flow_config::max_expansions ),
      field( "rng_seed", &flow_config::rng_seed ),
      field( "d_gate_ps", &flow_config::d_gate_ps ),
      field( "d_wire_ps_per_um", &flow_config::d_wire_ps_per_um ),
      field( "channel_gap", &flow_config::channel_gap ),
      field( "via_cost", &flow_config::via_cost ),
      field( "global_iterations", &flow_config::global_iterations ),
      field( "window_size", &flow_config::window_size ),
      field( "detailed_passes", &flow_config::detailed_passes ),
      field( "max_buffer_row_iterations", &flow_config::max_buffer_row_iterations ),
      field( "repair_iterations", &flow_config::repair_iterations ),
      field( "die_margin", &flow_config::die_margin ),
      field( "wire_margin", &flow_config::wire_margin ),
  };
  return fields;
}

} // namespace

bool set_config_value( flow_config& cfg, std::string_view key, std::string_view value )
{
  for ( auto const& f : config_fields() )
  {
    if ( f.key == key )
    {
      if ( !f.set( cfg, value ) )
        throw config_error( "invalid value '" + std::string( value ) + "' for " + std::string( key ) );
      return true;
    }
  }
  return false;
}

flow_config parse_config( std::string_view text, flow_config base )
{
  for_each_line( text, [&]( int ln, std::string_view line ) {
    auto const hash = line.find( '#' );
    if ( hash != std::string_view::npos )
      line = line.substr( 0, hash );
    auto const trim = []( std::string_view s ) {
      auto const b = s.find_first_not_of( " \t\r" );
      if ( b == std::string_view::npos )
        return std::string_view{};
      auto const e = s.find_last_not_of( " \t\r" );
      return s.substr( b, e - b + 1 );
    };
    line = trim( line );
    if ( line.empty() )
      return;
    auto const eq = line.find( '=' );
    if ( eq == std::string_view::npos )
      throw config_error( "line " + std::to_string( ln ) + ": expected key = value" );
    auto const key = trim( line.substr( 0, eq ) );
    auto const value = trim( line.substr( eq + 1 ) );
    try
    {
      if ( !set_config_value( base, key, value ) )
        throw config_error( "unknown key '" + std::string( key ) + "'" );
    }
    catch ( config_error const& e )
    {
      throw config_error( "line " + std::to_string( ln ) + ": " + e.what() );
    }
  } );
  base.validate();
  return base;
}

std::string write_config( flow_config const& cfg )
{
  std::ostringstream os;
  for ( auto const& f : config_fields() )
    os << f.key << " = " << f.get( cfg ) << '\n';
  return os.str();
}

std::string read_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw aqflow_error( "cannot read " + path );
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file( std::string const& path, std::string const& content )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw aqflow_error( "cannot write " + path );
  out << content;
}

std::string dump( json const& j )
{
  return j.dump( 2 ) + "\n";
}

/* JSON */

namespace
{

json point_json( point p )
{
  return json::array( { p.x, p.y } );
}

point json_point( json const& j )
{
  return { j.at( 0 ).get<micron>(), j.at( 1 ).get<micron>() };
}

std::string gate_type_name( gate_type t )
{
  return t == gate_type::inv ? "INV" : std::string( gate_keyword( t ) );
}

} // namespace

json netlist_to_json( netlist const& ntk )
{
  json j;
  j["model"] = ntk.model;
  j["inputs"] = json::array();
  for ( auto const& p : ntk.inputs )
    j["inputs"].push_back( { { "name", p.name }, { "net", p.net } } );
  j["outputs"] = json::array();
  for ( auto const& p : ntk.outputs )
    j["outputs"].push_back( { { "name", p.name }, { "net", p.net } } );
  j["nets"] = json::array();
  for ( auto const& n : ntk.nets )
    j["nets"].push_back( { { "id", n.id }, { "name", n.name } } );
  j["gates"] = json::array();
  for ( auto const& g : ntk.gates )
    j["gates"].push_back( { { "id", g.id }, { "type", gate_type_name( g.type ) }, { "fanin", g.fanin }, { "fanout", g.fanout }, { "phase", g.phase } } );
  return j;
}

netlist netlist_from_json( json const& j )
{
  netlist ntk;
  ntk.model = j.at( "model" ).get<std::string>();
  auto const& nets = j.at( "nets" );
  std::set<net_id> inputs;
  for ( auto const& p : j.at( "inputs" ) )
    inputs.insert( p.at( "net" ).get<net_id>() );
  for ( std::size_t i = 0; i < nets.size(); ++i )
  {
    if ( nets[i].at( "id" ).get<net_id>() != i )
      throw aqflow_error( "netlist JSON: net ids must be dense" );
    ntk.add_net( nets[i].at( "name" ).get<std::string>() );
  }
  for ( auto const& p : j.at( "inputs" ) )
  {
    auto const n = p.at( "net" ).get<net_id>();
    ntk.nets.at( n ).primary_input = true;
    ntk.inputs.push_back( { p.at( "name" ).get<std::string>(), n } );
  }
  for ( auto const& g : j.at( "gates" ) )
  {
    auto const type = gate_type_from_keyword( g.at( "type" ).get<std::string>() );
    if ( !type )
      throw aqflow_error( "netlist JSON: unknown gate type" );
    ntk.add_gate( *type, g.at( "fanin" ).get<std::vector<net_id>>(), g.at( "fanout" ).get<std::vector<net_id>>(), g.at( "phase" ).get<int>() );
  }
  for ( auto const& p : j.at( "outputs" ) )
    ntk.add_output( p.at( "name" ).get<std::string>(), p.at( "net" ).get<net_id>() );
  return ntk;
}

json placement_to_json( placement const& pl )
{
  json j;
  j["grid_step"] = pl.grid_step;
  j["depth"] = pl.depth;
  j["x"] = pl.x;
  j["cells"] = json::array();
  for ( auto const& k : pl.kinds )
    j["cells"].push_back( k.name );
  j["row_height"] = pl.row_height;
  j["channel_gap"] = pl.channel_gap;
  j["layer_width"] = pl.layer_width;
  j["input_x"] = pl.input_x;
  j["output_x"] = pl.output_x;
  j["overflow"] = pl.overflow;
  return j;
}

placement placement_from_json( json const& j )
{
  placement pl;
  pl.grid_step = j.at( "grid_step" ).get<micron>();
  pl.depth = j.at( "depth" ).get<int>();
  pl.x = j.at( "x" ).get<std::vector<micron>>();
  pl.row_height = j.at( "row_height" ).get<std::vector<micron>>();
  pl.channel_gap = j.at( "channel_gap" ).get<std::vector<micron>>();
  pl.layer_width = j.at( "layer_width" ).get<micron>();
  pl.input_x = j.at( "input_x" ).get<std::vector<micron>>();
  pl.output_x = j.at( "output_x" ).get<std::vector<micron>>();
  pl.overflow = j.at( "overflow" ).get<bool>();
  /* kinds are resolved against the library by the caller */
  for ( auto const& name : j.at( "cells" ) )
  {
    cell_kind k;
    k.name = name.get<std::string>();
    pl.kinds.push_back( k );
  }
  return pl;
}

json routes_to_json( route_db const& db )
{
  json j;
  j["expansions"] = db.expansions;
  j["total_length"] = db.total_length;
  j["nets"] = json::array();
  for ( auto const& r : db.nets )
  {
    json segs = json::array();
    for ( auto const& s : r.segments )
      segs.push_back( { { "a", point_json( s.a ) }, { "b", point_json( s.b ) }, { "layer", s.layer } } );
    json vias = json::array();
    for ( auto const& v : r.vias )
      vias.push_back( point_json( v ) );
    j["nets"].push_back( { { "net", r.net }, { "gap", r.gap }, { "length", r.length }, { "segments", segs }, { "vias", vias } } );
  }
  return j;
}

route_db routes_from_json( json const& j )
{
  route_db db;
  db.expansions = j.at( "expansions" ).get<std::vector<int>>();
  db.total_length = j.at( "total_length" ).get<micron>();
  for ( auto const& n : j.at( "nets" ) )
  {
    routed_net r;
    r.net = n.at( "net" ).get<net_id>();
    r.gap = n.at( "gap" ).get<int>();
    r.length = n.at( "length" ).get<micron>();
    for ( auto const& s : n.at( "segments" ) )
      r.segments.push_back( { json_point( s.at( "a" ) ), json_point( s.at( "b" ) ), s.at( "layer" ).get<int>() } );
    for ( auto const& v : n.at( "vias" ) )
      r.vias.push_back( json_point( v ) );
    db.nets.push_back( std::move( r ) );
  }
  return db;
}

json layout_to_json( layout const& lay )
{
  json j;
  j["model"] = lay.model;
  j["grid_step"] = lay.grid_step;
  j["layer_width"] = lay.layer_width;
  j["die"] = { { "x0", lay.die.x0 }, { "y0", lay.die.y0 }, { "x1", lay.die.x1 }, { "y1", lay.die.y1 } };
  j["cells"] = json::array();
  for ( auto const& c : lay.cells )
    j["cells"].push_back( { { "name", c.name }, { "kind", c.kind }, { "gate", c.gate }, { "row", c.row }, { "x", c.x }, { "y", c.y },
                            { "width", c.width }, { "height", c.height }, { "rotation", c.rotation } } );
  j["wires"] = json::array();
  for ( auto const& w : lay.wires )
    j["wires"].push_back( { { "net", w.net }, { "gap", w.gap }, { "layer", w.layer }, { "points", json::array( { point_json( w.a ), point_json( w.b ) } ) } } );
  j["vias"] = json::array();
  for ( auto const& v : lay.vias )
    j["vias"].push_back( { { "net", v.net }, { "x", v.at.x }, { "y", v.at.y } } );
  j["rows"] = json::array();
  for ( auto const& r : lay.rows )
    j["rows"].push_back( { { "track", r.track }, { "y", r.y }, { "height", r.height } } );
  j["pads"] = json::array();
  for ( auto const& p : lay.pads )
    j["pads"].push_back( { { "name", p.name }, { "input", p.input }, { "net", p.net }, { "x", p.at.x }, { "y", p.at.y } } );
  j["nets"] = json::array();
  for ( auto const& n : lay.nets )
    j["nets"].push_back( { { "id", n.id }, { "name", n.name }, { "from", point_json( n.from ) }, { "to", point_json( n.to ) },
                           { "from_track", n.from_track }, { "to_track", n.to_track } } );
  return j;
}

layout layout_from_json( json const& j )
{
  layout lay;
  lay.model = j.at( "model" ).get<std::string>();
  lay.grid_step = j.at( "grid_step" ).get<micron>();
  lay.layer_width = j.at( "layer_width" ).get<micron>();
  auto const& d = j.at( "die" );
  lay.die = { d.at( "x0" ).get<micron>(), d.at( "y0" ).get<micron>(), d.at( "x1" ).get<micron>(), d.at( "y1" ).get<micron>() };
  for ( auto const& c : j.at( "cells" ) )
    lay.cells.push_back( { c.at( "name" ).get<std::string>(), c.at( "kind" ).get<std::string>(), c.at( "gate" ).get<gate_id>(), c.at( "row" ).get<int>(),
                           c.at( "x" ).get<micron>(), c.at( "y" ).get<micron>(), c.at( "width" ).get<micron>(), c.at( "height" ).get<micron>(),
                           c.at( "rotation" ).get<int>() } );
  for ( auto const& w : j.at( "wires" ) )
    lay.wires.push_back( { w.at( "net" ).get<net_id>(), w.at( "gap" ).get<int>(), w.at( "layer" ).get<int>(), json_point( w.at( "points" ).at( 0 ) ),
                           json_point( w.at( "points" ).at( 1 ) ) } );
  for ( auto const& v : j.at( "vias" ) )
    lay.vias.push_back( { v.at( "net" ).get<net_id>(), { v.at( "x" ).get<micron>(), v.at( "y" ).get<micron>() } } );
  for ( auto const& r : j.at( "rows" ) )
    lay.rows.push_back( { r.at( "track" ).get<int>(), r.at( "y" ).get<micron>(), r.at( "height" ).get<micron>() } );
  for ( auto const& p : j.at( "pads" ) )
    lay.pads.push_back( { p.at( "name" ).get<std::string>(), p.at( "input" ).get<bool>(), p.at( "net" ).get<net_id>(),
                          { p.at( "x" ).get<micron>(), p.at( "y" ).get<micron>() } } );
  for ( auto const& n : j.at( "nets" ) )
    lay.nets.push_back( { n.at( "id" ).get<net_id>(), n.at( "name" ).get<std::string>(), json_point( n.at( "from" ) ), json_point( n.at( "to" ) ),
                          n.at( "from_track" ).get<int>(), n.at( "to_track" ).get<int>() } );
  return lay;
}

json drc_to_json( std::vector<drc_violation> const& violations )
{
  json j;
  j["clean"] = violations.empty();
  j["count"] = violations.size();
  j["violations"] = json::array();
  std::map<std::string, std::size_t> per_rule;
  for ( auto const& v : violations )
  {
    ++per_rule[std::string( to_string( v.rule ) )];
    j["violations"].push_back( { { "rule", to_string( v.rule ) }, { "x", v.at.x }, { "y", v.at.y }, { "objects", v.objects }, { "measured", v.measured },
                                 { "required", v.required } } );
  }
  j["by_rule"] = per_rule;
  return j;
}

json mapping_table_to_json( mapping_table const& table )
{
  auto const entry = []( maj_mapping const& m ) {
    json gates = json::array();
    for ( auto const& g : m.gates )
    {
      json ins = json::array();
      for ( auto const& in : g.inputs )
        ins.push_back( { { "source", static_cast<int>( in.source ) }, { "inverted", in.inverted } } );
      gates.push_back( ins );
    }
    json cells = json::array();
    for ( auto const& c : m.program.cells )
      cells.push_back( cell_name( c.type ) );
    return json{ { "scheme", m.scheme == mapping_scheme::one_level ? "one_level" : "two_level" },
                 { "jj", m.cost.jj_count },
                 { "levels", m.cost.levels },
                 { "gates", gates },
                 { "cells", cells } };
  };
  json j;
  j["reachable"] = table.size();
  j["functions"] = json::object();
  for ( int f = 0; f < 256; ++f )
  {
    json e = json::object();
    if ( auto const& m = table.one_level( static_cast<std::uint8_t>( f ) ) )
      e["one_level"] = entry( *m );
    if ( auto const& m = table.two_level( static_cast<std::uint8_t>( f ) ) )
      e["two_level"] = entry( *m );
    if ( !e.empty() )
    {
      char key[8];
      std::snprintf( key, sizeof key, "0x%02x", f );
      j["functions"][key] = e;
    }
  }
  return j;
}

/* SVG */

std::string write_layout_svg( layout const& lay )
{
  std::ostringstream os;
  auto const w = lay.die.x1 - lay.die.x0, h = lay.die.y1 - lay.die.y0;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"" << lay.die.x0 << ' ' << lay.die.y0 << ' ' << w
     << ' ' << h << "\">\n";
  os << "<rect x=\"" << lay.die.x0 << "\" y=\"" << lay.die.y0 << "\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\" stroke=\"black\"/>\n";
  os << "<g id=\"cells\" fill=\"#c8d8f0\" stroke=\"#203060\" stroke-width=\"1\">\n";
  for ( auto const& c : lay.cells )
  {
    os << "<rect x=\"" << c.x << "\" y=\"" << c.y << "\" width=\"" << c.width << "\" height=\"" << c.height << "\"><title>" << c.name << ' ' << c.kind
       << "</title></rect>\n";
  }
  os << "</g>\n<g id=\"wires\" fill=\"none\" stroke-width=\"2\">\n";
  for ( auto const& wr : lay.wires )
  {
    os << "<line x1=\"" << wr.a.x << "\" y1=\"" << wr.a.y << "\" x2=\"" << wr.b.x << "\" y2=\"" << wr.b.y << "\" stroke=\""
       << ( wr.layer == 0 ? "#d04020" : "#2080d0" ) << "\"/>\n";
  }
  os << "</g>\n<g id=\"vias\" fill=\"black\">\n";
  for ( auto const& v : lay.vias )
  {
    os << "<rect x=\"" << v.at.x - 2 << "\" y=\"" << v.at.y - 2 << "\" width=\"4\" height=\"4\"/>\n";
  }
  os << "</g>\n<g id=\"pads\" fill=\"#40a040\">\n";
  for ( auto const& p : lay.pads )
  {
    os << "<circle cx=\"" << p.at.x << "\" cy=\"" << p.at.y << "\" r=\"3\"><title>" << p.name << "</title></circle>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

} // namespace aqflow
