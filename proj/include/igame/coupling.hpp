#pragma once

#include <Eigen/Dense>
#include <vector>

#include "igame/basis.hpp"
#include "igame/types.hpp"

namespace igame {

/// Affine-in-epsilon coupling of one control channel:
///   u_i = A_i(phi, u_i°) + B_i(phi, u_i°) * eps_i
/// The channel covers the listed coordinates of the full control vector;
/// the pure control of the channel has the same coordinates. The gain
/// expansion packs the B matrix column-major: entry (r, c) of B is output
/// row c * channel_dim + r of `gain`.
struct ChannelCoupling {
    std::vector<int> control_coords;
    int epsilon_dim = 0;
    DictionaryExpansion offset;  // (phi, u°_i) -> channel_dim
    DictionaryExpansion gain;    // (phi, u°_i) -> channel_dim * epsilon_dim

    int channel_dim() const { return static_cast<int>(control_coords.size()); }
    Eigen::MatrixXd gain_matrix(const Eigen::VectorXd& phi, const Eigen::VectorXd& u_pure) const;
    Eigen::VectorXd couple(const Eigen::VectorXd& phi, const Eigen::VectorXd& u_pure,
                           const Eigen::VectorXd& eps) const;
    void validate(int state_dim) const;

    /// u_i = u_i° + eps_i on the given coordinates.
    static ChannelCoupling additive(int state_dim, std::vector<int> coords);
};

/// Coupling of the full interactive control vector, one channel per actor.
struct CouplingForm {
    std::vector<ChannelCoupling> channels;

    int control_dim() const;
    int total_epsilon_dim() const;

    /// Assemble u from the full pure-control vector and concatenated eps.
    Eigen::VectorXd couple_full(const Eigen::VectorXd& phi, const Eigen::VectorXd& u_pure,
                                const Eigen::VectorXd& eps) const;

    void validate(int state_dim) const;

    /// Extract a channel's coordinates from a full control vector.
    Eigen::VectorXd channel_slice(std::size_t channel, const Eigen::VectorXd& full) const;

    /// u = u° + eps, one channel per contiguous scalar block.
    static CouplingForm additive(int state_dim, int control_dim);
    /// Single channel with the given offset/gain expansions.
    static CouplingForm single(int control_dim, int epsilon_dim, DictionaryExpansion offset,
                               DictionaryExpansion gain);
};

}  // namespace igame
