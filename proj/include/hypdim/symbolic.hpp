#pragma once

#include "hypdim/models.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hypdim {

using Word = std::vector<int>;

/// Enumeration cap: k * log(symbols) <= 24 log 2 (about 16.7M words).
inline constexpr int kWordCapBits = 24;

/// Throws CapExceeded when symbols^k exceeds the enumeration cap.
void check_word_cap(std::size_t symbols, int k);

/// True iff some power of the matrix (up to (size-1)^2 + 1) is entrywise positive.
bool is_primitive(const TransitionMatrix& transition);

/// Number of admissible words of length k (exact while it fits in 64 bits).
std::uint64_t count_words(const TransitionMatrix& transition, int k);

/// Depth-first visit of all admissible length-k words in lexicographic order.
template <class Visitor>
void for_each_word(const TransitionMatrix& transition, int k, Visitor&& visit) {
    check_word_cap(transition.size(), k);
    const int symbols = static_cast<int>(transition.size());
    Word word(static_cast<std::size_t>(k), 0);
    std::vector<int> next(static_cast<std::size_t>(k), 0);
    int depth = 0;
    next[0] = 0;
    while (depth >= 0) {
        int& candidate = next[static_cast<std::size_t>(depth)];
        while (candidate < symbols && depth > 0 &&
               !transition.allowed(static_cast<std::size_t>(word[static_cast<std::size_t>(depth) - 1]),
                                   static_cast<std::size_t>(candidate))) {
            ++candidate;
        }
        if (candidate >= symbols) {
            --depth;
            continue;
        }
        word[static_cast<std::size_t>(depth)] = candidate++;
        if (depth + 1 == k) {
            visit(static_cast<const Word&>(word));
        } else {
            ++depth;
            next[static_cast<std::size_t>(depth)] = 0;
        }
    }
}

std::vector<Word> admissible_words(const TransitionMatrix& transition, int k);

double birkhoff_sum(const Potential& potential, std::span<const int> word);

/// Forward cylinder: points whose first word.size() itineraries follow word. Geometric coding only.
std::optional<Box> cylinder_rect(const ModelSystem& model, std::span<const int> word);

/// Points whose past itinerary is word (oldest symbol first; word.back() is the branch of f^-1(x)).
std::optional<Box> backward_rect(const ModelSystem& model, std::span<const int> word);

struct Cylinder {
    Word word;
    Box rect;
};

/// One representative per admissible word; any two differ by at least delta at some step < k.
struct SeparatedSet {
    int k = 0;
    double delta = 0.0;
    std::vector<Word> words;
    std::vector<Point> points;
};

/// Smallest one-step separation between distinct branches: the domain gap, or for abutting
/// domains with equal linear parts the distance between the two inverse branches.
double min_branch_gap(const ModelSystem& model);
/// Half of min_branch_gap.
double default_delta(const ModelSystem& model);

/// Cylinder centers at depth k. Throws DeltaTooLarge when delta exceeds the branch gap.
SeparatedSet separated_set(const ModelSystem& model, int k, std::optional<double> delta = std::nullopt);

/// Sum over admissible k-words of exp(S_k potential), in lexicographic order.
/// The delta guard applies to geometrically coded models; declared codings are summed symbolically.
double partition_sum(const ModelSystem& model, const Potential& potential, int k,
                     std::optional<double> delta = std::nullopt);

struct PerronData {
    double radius = 0.0;
    Eigen::VectorXd right;  ///< M r = radius r, normalized to sum 1
    Eigen::VectorXd left;   ///< l^T M = radius l^T, normalized so l . r = 1
    int iterations = 0;
};

/// Power iteration with Collatz-Wielandt bracketing; stops when the bracket is below 1e-14
/// relative or after 1e5 iterations. Requires a primitive non-negative matrix.
PerronData perron(const Eigen::MatrixXd& matrix);

/// M[i][j] = A[i][j] * exp(potential[j]).
Eigen::MatrixXd weighted_transition(const TransitionMatrix& transition, const Potential& potential);

/// log of the spectral radius of the weighted transition matrix. Throws NotMixing.
double pressure_spectral(const TransitionMatrix& transition, const Potential& potential);
double pressure_spectral(const ModelSystem& model, const Potential& potential);

/// Stationary Markov measure on the coding.
struct MarkovMeasure {
    std::vector<double> stationary;
    Eigen::MatrixXd transition;

    static MarkovMeasure bernoulli(std::vector<double> probabilities);
    static MarkovMeasure point_mass(std::size_t symbols, int symbol);
    /// Stationary vector computed from the stochastic matrix (unique for irreducible chains).
    static MarkovMeasure from_transition(const Eigen::MatrixXd& stochastic);
};

/// Equilibrium state of a locally constant potential: P_ij = M_ij r_j / (rho r_i), pi_i = l_i r_i.
MarkovMeasure equilibrium_measure(const TransitionMatrix& transition, const Potential& potential);
/// Maximal-entropy (Parry) measure.
MarkovMeasure parry_measure(const TransitionMatrix& transition);

struct LyapunovExponent {
    double value = 0.0;
    int multiplicity = 0;
};

struct MarkovMeasureStats {
    double entropy = 0.0;  ///< nats per iterate
    std::vector<LyapunovExponent> exponents;
    double potential_integral = 0.0;

    double positive_exponent_sum() const;
};

/// Throws IncompatibleStochastics when the measure does not live on the coding.
MarkovMeasureStats markov_measure_stats(const ModelSystem& model, const Potential& potential,
                                        const MarkovMeasure& measure);

}  // namespace hypdim
