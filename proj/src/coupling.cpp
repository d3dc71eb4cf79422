#include "igame/coupling.hpp"

#include <algorithm>
#include <numeric>

namespace igame {

Eigen::MatrixXd ChannelCoupling::gain_matrix(const Eigen::VectorXd& phi,
                                             const Eigen::VectorXd& u_pure) const {
    const Eigen::VectorXd flat = gain.eval(phi, u_pure);
    const int cd = channel_dim();
    if (flat.size() != static_cast<Eigen::Index>(cd) * epsilon_dim) {
        throw DimensionMismatch("ChannelCoupling: gain output must be channel_dim * epsilon_dim");
    }
    Eigen::MatrixXd B(cd, epsilon_dim);
    for (int c = 0; c < epsilon_dim; ++c) {
        for (int r = 0; r < cd; ++r) {
            B(r, c) = flat[static_cast<Eigen::Index>(c) * cd + r];
        }
    }
    return B;
}

Eigen::VectorXd ChannelCoupling::couple(const Eigen::VectorXd& phi, const Eigen::VectorXd& u_pure,
                                        const Eigen::VectorXd& eps) const {
    if (eps.size() != epsilon_dim) {
        throw DimensionMismatch("ChannelCoupling: epsilon dimension mismatch");
    }
    return offset.eval(phi, u_pure) + gain_matrix(phi, u_pure) * eps;
}

void ChannelCoupling::validate(int state_dim) const {
    if (control_coords.empty()) throw DimensionMismatch("ChannelCoupling: no control coordinates");
    if (epsilon_dim < 1) throw DimensionMismatch("ChannelCoupling: epsilon_dim must be >= 1");
    const int cd = channel_dim();
    if (offset.state_dim != state_dim || offset.control_dim != cd || offset.output_dim != cd) {
        throw DimensionMismatch("ChannelCoupling: offset expansion has wrong shape");
    }
    if (gain.state_dim != state_dim || gain.control_dim != cd ||
        gain.output_dim != cd * epsilon_dim) {
        throw DimensionMismatch("ChannelCoupling: gain expansion has wrong shape");
    }
}

int CouplingForm::control_dim() const {
    int n = 0;
    for (const auto& ch : channels) n += ch.channel_dim();
    return n;
}

int CouplingForm::total_epsilon_dim() const {
    int n = 0;
    for (const auto& ch : channels) n += ch.epsilon_dim;
    return n;
}

Eigen::VectorXd CouplingForm::channel_slice(std::size_t channel, const Eigen::VectorXd& full) const {
    const auto& coords = channels.at(channel).control_coords;
    Eigen::VectorXd out(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t j = 0; j < coords.size(); ++j) {
        if (coords[j] < 0 || coords[j] >= full.size()) {
            throw DimensionMismatch("CouplingForm: channel coordinate out of range");
        }
        out[static_cast<Eigen::Index>(j)] = full[coords[j]];
    }
    return out;
}

Eigen::VectorXd CouplingForm::couple_full(const Eigen::VectorXd& phi,
                                          const Eigen::VectorXd& u_pure,
                                          const Eigen::VectorXd& eps) const {
    if (eps.size() != total_epsilon_dim()) {
        throw DimensionMismatch("CouplingForm: concatenated epsilon dimension mismatch");
    }
    Eigen::VectorXd u = Eigen::VectorXd::Zero(control_dim());
    Eigen::Index eps_at = 0;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const auto& ch = channels[c];
        const Eigen::VectorXd u_ch =
            ch.couple(phi, channel_slice(c, u_pure), eps.segment(eps_at, ch.epsilon_dim));
        for (std::size_t j = 0; j < ch.control_coords.size(); ++j) {
            u[ch.control_coords[j]] = u_ch[static_cast<Eigen::Index>(j)];
        }
        eps_at += ch.epsilon_dim;
    }
    return u;
}

void CouplingForm::validate(int state_dim) const {
    if (channels.empty()) throw DimensionMismatch("CouplingForm: no channels");
    std::vector<int> seen;
    for (const auto& ch : channels) {
        ch.validate(state_dim);
        for (int c : ch.control_coords) {
            if (std::find(seen.begin(), seen.end(), c) != seen.end()) {
                throw DimensionMismatch("CouplingForm: channels overlap on a control coordinate");
            }
            seen.push_back(c);
        }
    }
}

ChannelCoupling ChannelCoupling::additive(int state_dim, std::vector<int> coords) {
    ChannelCoupling ch;
    const int cd = static_cast<int>(coords.size());
    ch.control_coords = std::move(coords);
    ch.epsilon_dim = cd;
    ch.offset = DictionaryExpansion::input_identity(state_dim, cd);
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(cd, cd);
    ch.gain = DictionaryExpansion::constant(
        state_dim, cd, Eigen::Map<Eigen::VectorXd>(eye.data(), eye.size()));
    return ch;
}

CouplingForm CouplingForm::additive(int state_dim, int control_dim) {
    std::vector<int> coords(static_cast<std::size_t>(control_dim));
    std::iota(coords.begin(), coords.end(), 0);
    CouplingForm form;
    form.channels = {ChannelCoupling::additive(state_dim, std::move(coords))};
    form.validate(state_dim);
    return form;
}

CouplingForm CouplingForm::single(int control_dim, int epsilon_dim, DictionaryExpansion offset,
                                  DictionaryExpansion gain) {
    ChannelCoupling ch;
    ch.control_coords.resize(static_cast<std::size_t>(control_dim));
    std::iota(ch.control_coords.begin(), ch.control_coords.end(), 0);
    ch.epsilon_dim = epsilon_dim;
    ch.offset = std::move(offset);
    ch.gain = std::move(gain);
    CouplingForm form;
    form.channels = {std::move(ch)};
    return form;
}

}  // namespace igame
