#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "blockprox/partition.hpp"

namespace blockprox {

// R(x) = 0. Not one of the benchmark penalties, but needed for unregularized
// least-squares runs and as the baseline in several solver tests.
struct ZeroReg {};

// R(x) = lambda * ||x||_1
struct L1 {
    double lambda;
};

// R(x) = lambda * sum_g ||x_g||_2 over a partition of coordinates into groups.
struct GroupL2 {
    double lambda;
    BlockPartition groups;
};

// R(x) = lambda * sum_i min{|x_i|, theta}
struct CappedL1 {
    double lambda;
    double theta;
};

// R(x) = sum_i r_{lambda,gamma}(x_i), the three-piece SCAD penalty.
struct Scad {
    double lambda;
    double gamma;
};

using RegularizerSpec = std::variant<ZeroReg, L1, GroupL2, CappedL1, Scad>;

/// Throws ConfigError when parameters are out of range or the group structure
/// does not partition {0..n-1}.
void validate_spec(const RegularizerSpec& spec, std::size_t n);

bool is_convex(const RegularizerSpec& spec);

/// True when every GroupL2 group lies inside a single block of P (trivially
/// true for the separable penalties).
bool groups_align(const RegularizerSpec& spec, const BlockPartition& P);

double reg_value(const RegularizerSpec& spec, std::span<const double> x);

/// Penalty restricted to block i; xi is the block slice of x.
double reg_block_value(const RegularizerSpec& spec, const BlockPartition& P, std::size_t i,
                       std::span<const double> xi);

/// Scalar penalty pieces.
double scad_value(double u, double lambda, double gamma);
double capped_l1_value(double u, double lambda, double theta);

/// Soft-thresholding: sign(u_i) * (|u_i| - tau)_+.
std::vector<double> prox_l1(std::span<const double> u, double tau);

/// Group-soft-thresholding: per group, (1 - tau/||u_g||)_+ u_g.
std::vector<double> prox_group_l2(std::span<const double> u, double tau,
                                  const BlockPartition& groups);

/// argmin_x 1/2 (x-v)^2 + lambda*min{|x|, theta}; ties keep the first
/// candidate sign(v)*max{theta, |v|}.
double prox_capped_l1(double v, double lambda, double theta);

/// argmin_x 1/2 (x-u)^2 + r_{lambda,gamma}(x); ties broken by candidate order.
double prox_scad(double u, double lambda, double gamma);

/// argmin_x 1/2 (x-u)^2 + alpha * r_{lambda,gamma}(x) for a general step.
double prox_scad_step(double u, double lambda, double gamma, double alpha);

/// Proximal step on block i with step size alpha: minimizes
/// 1/(2 alpha) ||x - u||^2 + R_i(x) over the block.
void prox_block(const RegularizerSpec& spec, const BlockPartition& P, std::size_t i,
                std::span<const double> u, double alpha, std::span<double> out);

/// Whole-vector proximal map applied block by block (identical to the full
/// prox for these block-separable penalties).
std::vector<double> prox_full(const RegularizerSpec& spec, const BlockPartition& P,
                              std::span<const double> u, double alpha);

/// GS-s score of block i: min over subgradients s of g_i of
/// ||grad_i + s||_2. Defined for convex penalties only.
double gs_s_score(const RegularizerSpec& spec, const BlockPartition& P, std::size_t i,
                  std::span<const double> grad_i, std::span<const double> xi);

}  // namespace blockprox
