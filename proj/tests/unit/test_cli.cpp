#include "slabtrans_app/config.hpp"
#include "slabtrans_app/runner.hpp"
#include "slabtrans_app/svg.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace slabtrans::app;
namespace fs = std::filesystem;

namespace
{

std::map<std::string, std::string>
read_tree(const fs::path& dir)
{
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
  {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    files[entry.path().filename().string()] = os.str();
  }
  return files;
}

} // namespace

TEST(Config, Defaults)
{
  const auto c = default_config();
  EXPECT_EQ(c.cases.size(), 10u);
  ASSERT_EQ(c.eps.size(), 4u);
  EXPECT_DOUBLE_EQ(c.eps[0].value, 1.0 / 32);
  EXPECT_EQ(c.eps[3].label, "1-256");
  EXPECT_EQ(c.kernel, "paper");
  EXPECT_EQ(c.halfspace_order, 16);
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, EpsilonForms)
{
  EXPECT_DOUBLE_EQ(parse_epsilon("1/64", "t").value, 1.0 / 64);
  EXPECT_EQ(parse_epsilon("1/64", "t").label, "1-64");
  EXPECT_DOUBLE_EQ(parse_epsilon("0.03125", "t").value, 0.03125);
  EXPECT_DOUBLE_EQ(parse_epsilon("3.125e-2", "t").value, 0.03125);
  for (const char* bad : {"2", "0", "-0.1", "1/0", "abc", "1/x"})
    EXPECT_THROW(parse_epsilon(bad, "t"), ConfigError) << bad;
}

TEST(Config, ParsesSectionsAndOverrides)
{
  const auto c = parse_config_text("# comment\n"
                                   "[run]\n"
                                   "cases = pure1, coupled2\n"
                                   "eps = 1/16, 1/32\n"
                                   "out = here\n"
                                   "plots = true\n"
                                   "threads = 3\n"
                                   "[kernel]\n"
                                   "name = legendre-series\n"
                                   "coefficients = 1, 0.3\n"
                                   "[halfspace]\n"
                                   "N = 24\n"
                                   "quadrature = auto\n"
                                   "[kinetic]\n"
                                   "dt_cap = none\n"
                                   "[coupled]\n"
                                   "x_m = 0.25\n");
  EXPECT_EQ(c.cases, (std::vector<std::string>{"pure1", "coupled2"}));
  ASSERT_EQ(c.eps.size(), 2u);
  EXPECT_EQ(c.out_dir, "here");
  EXPECT_TRUE(c.plots);
  EXPECT_EQ(c.threads, 3);
  EXPECT_EQ(c.kernel_coefficients, (std::vector<double>{1.0, 0.3}));
  EXPECT_EQ(c.halfspace_order, 24);
  EXPECT_FALSE(c.kinetic_dt_cap);
  EXPECT_DOUBLE_EQ(c.coupled_xm, 0.25);
  EXPECT_NO_THROW(validate(c));

  auto d = default_config();
  set_cases(d, "stability", "--case");
  set_eps(d, "1/8", "--eps");
  EXPECT_EQ(d.cases, std::vector<std::string>{"stability"});
  EXPECT_EQ(d.eps.size(), 1u);
  EXPECT_THROW(set_cases(d, "pure9", "--case"), ConfigError);
  EXPECT_THROW(set_eps(d, "", "--eps"), ConfigError);
}

TEST(Config, ErrorsNameTheLine)
{
  try
  {
    parse_config_text("[run]\ncases = pure1\nbogus = 1\n", "my.cfg");
    FAIL() << "expected ConfigError";
  }
  catch (const ConfigError& e)
  {
    const std::string m = e.what();
    EXPECT_NE(m.find("my.cfg:3"), std::string::npos) << m;
    EXPECT_NE(m.find("bogus"), std::string::npos) << m;
  }
  EXPECT_THROW(parse_config_text("[nope]\n"), ConfigError);
  EXPECT_THROW(parse_config_text("x = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[heat]\ndx = -1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\neps = 1.5\n"), ConfigError);
  auto c = default_config();
  c.kinetic_cfl = 1.5;
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_THROW(parse_config_file("/nonexistent/slabtrans.cfg"), ConfigError);
}

TEST(Config, SplitList)
{
  EXPECT_EQ(split_list(" a, b ,c "), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Csv, NumberFormat)
{
  EXPECT_EQ(format_number(0.5), "5.00000000000e-01");
  EXPECT_EQ(format_number(-1.0 / 3), "-3.33333333333e-01");
  EXPECT_EQ(format_number(0.0), "0.00000000000e+00");
}

TEST(Csv, WritesSchemaHeader)
{
  const auto dir = fs::temp_directory_path() / "slabtrans_csv_test";
  fs::create_directories(dir);
  const auto path = (dir / "t.csv").string();
  write_csv(path, {"a", "b"}, {{"1", "2"}, {"3", "4"}});
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, csv_schema);
  std::getline(in, line);
  EXPECT_EQ(line, "a,b");
  std::getline(in, line);
  EXPECT_EQ(line, "1,2");
  fs::remove_all(dir);
}

TEST(Svg, RendersSeriesAndGuides)
{
  PlotStyle style;
  style.title = "E <theta>";
  style.log_x = style.log_y = true;
  style.slope_guides = true;
  const Series s{"pure1", {1.0 / 64, 1.0 / 32, 1.0 / 16}, {0.006, 0.012, 0.023}, palette(0)};
  const auto doc = render_svg({s}, style);
  EXPECT_EQ(doc.rfind("<svg", 0), 0u);
  EXPECT_NE(doc.find("</svg>"), std::string::npos);
  EXPECT_NE(doc.find("<polyline"), std::string::npos);
  EXPECT_NE(doc.find("E &lt;theta&gt;"), std::string::npos);
  EXPECT_NE(doc.find("slope 0.4, 0.5, 1.0"), std::string::npos);
  EXPECT_EQ(doc, render_svg({s}, style));
}

TEST(Svg, ZoomPanelAndErrors)
{
  PlotStyle style;
  style.zoom = std::make_pair(-1.0, -0.9);
  const Series s{"theta", {-1.0, -0.95, 0.0, 1.0}, {0.0, 0.1, 1.0, 0.0}};
  const auto doc = render_svg({s}, style);
  EXPECT_NE(doc.find("zoom near x = -1"), std::string::npos);
  EXPECT_THROW(render_svg({}, style), std::invalid_argument);
  EXPECT_THROW(render_svg({Series{"bad", {1.0}, {}}}, style), std::invalid_argument);
  EXPECT_NE(palette(0), palette(1));
  EXPECT_EQ(palette(0), palette(8));
}

TEST(Runner, OutputsAreDeterministic)
{
  const auto base = fs::temp_directory_path() / "slabtrans_determinism";
  fs::remove_all(base);
  auto config = default_config();
  set_cases(config, "pure1,coupled1,stability", "test");
  set_eps(config, "1/8", "test");
  config.plots = true;
  std::ostringstream log;
  config.out_dir = (base / "a").string();
  ASSERT_EQ(run(config, log), 0) << log.str();
  config.out_dir = (base / "b").string();
  config.threads = 3;
  ASSERT_EQ(run(config, log), 0) << log.str();
  const auto a = read_tree(base / "a");
  const auto b = read_tree(base / "b");
  EXPECT_GT(a.size(), 5u);
  EXPECT_TRUE(a.count("errors.csv"));
  EXPECT_TRUE(a.count("deviation_vs_time.csv"));
  EXPECT_FALSE(a.count("failures.csv"));
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [name, content] : a)
  {
    ASSERT_TRUE(b.count(name)) << name;
    EXPECT_EQ(content, b.at(name)) << name;
  }
  fs::remove_all(base);
}
