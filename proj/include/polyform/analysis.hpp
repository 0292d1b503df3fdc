#pragma once

#include "polyform/tiler.hpp"

#include <map>
#include <string>
#include <vector>

namespace pf {

struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RegularityReport {
    bool faces_regular = false;
    double edge_length = 0;
    double edge_spread = 0;  // max - min over all edges
    double angle_spread = 0; // worst spread of corner angles among faces of one gonality
    std::map<int, double> corner_angle; // gonality -> angle

    bool valency_constant = false;
    int valency = 0;
    int interior_vertices = 0;
    int skipped_vertices = 0;
    bool signatures_match = false;
    bool figures_match = false;
    int figure_pairs = 0;
    double figure_gap = 0;

    bool regular() const { return faces_regular && valency_constant && figures_match; }
};

RegularityReport verify_regular_faces(const Surface& s, double tol = 1e-9);
void verify_vertex_figures(const Surface& s, RegularityReport& report, double tol = 1e-9,
                           unsigned seed = 12345, int pairs = 10);
RegularityReport verify_regular(const Surface& s, double tol = 1e-9);

// combinatorial map on flags (face, edge, end); r0 swaps the end, r1 the edge
// at the same vertex, r2 the face across the edge
struct FlagMap {
    std::vector<int> r0, r1, r2;
    std::vector<int> face; // face class of each flag
    int size() const { return static_cast<int>(r0.size()); }
};

struct QuotientComplex {
    int V = 0, E = 0, F = 0;
    int euler = 0;
    bool orientable = true;
    int genus = 0; // orientable genus, or number of crosscaps
    std::map<int, int> valencies;  // valency -> vertex count
    std::map<int, int> gonalities; // gonality -> face count
    int cells = 1;                 // cells of the tiling covered by one copy
    FlagMap map;
};

FlagMap flag_map(const Surface& closed);
QuotientComplex complex_of(const FlagMap& m);
QuotientComplex quotient_complex(const Surface& surface, const GroupSpec& group);

std::vector<int> straight_ahead_cycles(const FlagMap& m);
std::vector<int> petrie_cycles(const FlagMap& m);

struct Expectation {
    std::optional<int> vertices, edges, faces, genus, valency, gonality;
};

struct Consistency {
    bool pass = true;
    std::string violated;
};

Consistency genus_consistency(const Expectation& e);
Consistency genus_consistency(const QuotientComplex& q, const Expectation& e);

// orthogonal 3x3 symmetries of the Platonic type that also preserve the patch
std::vector<Mat3> content_symmetries(const FundamentalPatch& patch);

}
