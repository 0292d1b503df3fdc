#pragma once

#include "polyform/bisect.hpp"
#include "polyform/solids.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pf {

enum class Base { Platonic, Truncated, Rectified };

std::string to_string(Base b);
std::optional<Base> parse_base(std::string_view name);

struct SolveResult {
    SpaceForm space = SpaceForm::Euclidean;
    bool scale_free = false;
    double value = 0;     // the solved parameter (a, b, or the kis parent a)
    double inradius = 0;  // canonical internal parameter of the solved solid
    std::optional<double> secondary;          // pyramid s, or fundamental a for inner solves
    std::optional<double> secondary_inradius; // fundamental inradius for inner solves
    double residual = 0;
    double lo = 0, hi = 0; // bracket, in the solved internal parameter
    int iterations = 0;
    Classification classification = Classification::Finite;
    std::optional<Solid> witness;
    std::optional<Pyramid> pyramid;
};

// dihedral angle of the Euclidean solid, and of its ideal hyperbolic version
double euclidean_dihedral(int p, int q);
double ideal_dihedral(int p, int q);

struct PlatonicPlace {
    SpaceForm space;
    Classification kind; // finite / ideal / hyperideal in H, finite otherwise
};
PlatonicPlace platonic_geography(int p, int q, int n);

SolveResult solve_platonic_angle(int p, int q, int n,
                                 std::optional<SpaceForm> want = std::nullopt);
SolveResult solve_prismatic_inner(int p, int q, int n, Base base);

double euclidean_gamma(int q, int n);
double euclidean_kis_sum(int p, int q, int n);
SpaceForm kis_geography(int p, int q, int n);

struct KisBracket {
    double t_lo, t_hi;
    double sum_lo, sum_hi;
};
KisBracket kis_bracket(int p, int q, int n, SpaceForm s);
SolveResult solve_kis_angle_condition(int p, int q, int n,
                                      std::optional<SpaceForm> want = std::nullopt);
SolveResult solve_antiprismatic_inner(int p, int q, int n, Base base);

// measured regularity of the inner solid's attached prisms / antiprisms
struct PrismMeasure {
    double base_edge;
    double lateral_edge;
};
PrismMeasure measure_prism(const Solid& inner, const Solid& fundamental);
PrismMeasure measure_antiprism(const Solid& inner, const Solid& fundamental);

struct AngleRow {
    int p, q;
    std::string name;
    double sum2, sum3; // degrees
};
std::vector<AngleRow> euclidean_angle_table();

std::string solid_name(int p, int q);

}
