#include <sstream>

#include "test_support.hpp"

namespace mvc {
namespace {

using namespace mvc::testing;

TEST(Obj, RoundTripPreservesEveryBit) {
  TriangleSoup s = shapes::icosphere(1);
  s.vertices[0] = Vec3(0.1, 1.0 / 3.0, -2.0e-300);
  s.vertices[1] = Vec3(1e17, -0.0, std::nextafter(1.0, 2.0));
  std::ostringstream out;
  io::write_obj(out, s);
  std::istringstream in(out.str());
  const TriangleSoup r = io::parse_obj(in);
  EXPECT_EQ(r.vertices, s.vertices);
  EXPECT_EQ(r.triangles, s.triangles);
}

TEST(Obj, CommentsAndBlankLines) {
  std::istringstream in("# cage\n\nv 0 0 0\nv 1 0 0  # corner\nv 0 1 0\n\tv 0 0 1\nf 1 2 3\nf 1 3 4\n");
  const TriangleSoup s = io::parse_obj(in);
  EXPECT_EQ(s.vertices.size(), 4u);
  ASSERT_EQ(s.triangles.size(), 2u);
  EXPECT_EQ(s.triangles[1], (Triangle{0, 2, 3}));
}

TEST(Obj, ParseErrorsCarryLineNumbers) {
  struct Case {
    const char* text;
    std::size_t line;
  };
  for (const Case& c : {Case{"v 0 0 0\nv 1 x 0\n", 2}, Case{"v 0 0 0\nvn 0 0 1\n", 2},
                        Case{"v 0 0 0\nv 1 0 0\nv 0 1 0\n\nf 1 2 3 4\n", 5}, Case{"v 0 0\n", 1},
                        Case{"v 0 0 0\nf 1 2 5\n", 2}, Case{"v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1 2 3\n", 4},
                        Case{"v 0 0 nan\n", 1}}) {
    std::istringstream in(c.text);
    try {
      io::parse_obj(in, "mesh.obj");
      ADD_FAILURE() << "expected ParseError for: " << c.text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
      ASSERT_TRUE(e.index().has_value());
      EXPECT_EQ(*e.index(), c.line) << e.what();
      EXPECT_NE(std::string(e.what()).find("mesh.obj:" + std::to_string(c.line)), std::string::npos);
    }
  }
}

TEST(Obj, MissingFile) {
  expect_error(ErrorCode::InvalidInput, [] { io::read_obj("/nonexistent/cage.obj"); });
}

TEST(Points, Parse) {
  std::istringstream in("# header\n0.5 0 1\n\n-1e-3 2 3 # trailing\n");
  const auto p = io::parse_points(in);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[1], Vec3(-1e-3, 2, 3));
  std::istringstream bad("1 2 3\n1 2\n");
  try {
    io::parse_points(bad);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_EQ(e.index().value_or(0), 2u);
  }
}

TEST(Constraints, ParseAllFields) {
  const CageMesh cage = cube_cage();
  const auto doc = io::json::parse(R"({
    "constraints": [
      {"point": [0.1, 0.2, 0.3], "value": [1, 2, 3], "weight": 2.5},
      {"point": [0, 0, 0], "jacobian": [1, 0, 0, 0, 2, 0, 0, 0, 3]}
    ],
    "rigidity": {"points": {"grid": 3}, "weight": 0.5}
  })");
  const io::ConstraintsDocument c = io::parse_constraints(doc, cage);
  ASSERT_EQ(c.constraints.size(), 2u);
  EXPECT_EQ(c.constraints[0].point, Vec3(0.1, 0.2, 0.3));
  EXPECT_EQ(*c.constraints[0].target_value, Vec3(1, 2, 3));
  EXPECT_FALSE(c.constraints[0].target_jacobian.has_value());
  EXPECT_EQ(c.constraints[0].weight, 2.5);
  EXPECT_EQ(c.constraints[1].weight, 1.0);
  ASSERT_TRUE(c.constraints[1].target_jacobian.has_value());
  EXPECT_EQ((*c.constraints[1].target_jacobian)(1, 1), 2.0);
  EXPECT_EQ(c.rigidity.weight, 0.5);
  EXPECT_EQ(c.rigidity.sample_points, rigidity_grid(cage, 3));

  const auto listed = io::json::parse(R"({"rigidity": {"points": [[0, 0, 0], [0.5, 0, 0]], "weight": 1}})");
  EXPECT_EQ(io::parse_constraints(listed, cage).rigidity.sample_points.size(), 2u);
}

TEST(Constraints, Rejects) {
  const CageMesh cage = cube_cage();
  for (const char* text : {R"([])", R"({"constraints": {}})", R"({"constraints": [{"value": [1, 2, 3]}]})",
                           R"({"constraints": [{"point": [1, 2]}]})", R"({"constraints": [{"point": [0, 0, 0], "weight": "x"}]})",
                           R"({"rigidity": {"points": 3}})", R"({"constraints": [{"point": [0, 0, 0], "jacobian": [1, 2]}]})"}) {
    expect_error(ErrorCode::ParseError, [&] { io::parse_constraints(io::json::parse(text), cage); });
  }
}

TEST(Json, EntriesAreStable) {
  const CageMesh cage = octant_cage();
  const Vec3 p(0.1, 0.1, 0.1);
  const io::json a = io::weights_entry(p, mvc_coordinates(cage, p));
  EXPECT_EQ(a["status"], "ok");
  EXPECT_EQ(a["lambda"].size(), 4u);
  const io::json b = io::derivatives_entry(p, derivative_set(cage, p));
  EXPECT_EQ(b["grad_lambda"].size(), 4u);
  EXPECT_EQ(b["hess_lambda"][0].size(), 9u);  // row-major 3x3
  EXPECT_EQ(a.dump(), io::weights_entry(p, mvc_coordinates(cage, p)).dump());
}

}  // namespace
}  // namespace mvc
