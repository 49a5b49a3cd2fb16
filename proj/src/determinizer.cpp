#include "fondsp/determinizer.hpp"

#include "fondsp/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fondsp {

std::string classical_operator_name(const ClassicalTask &task, const ClassicalAction &action) {
    const NdGroundAction &nd = task.nd_action(action);
    const Schema &schema = task.base->schemas[nd.schema];
    if (!task.all_outcome || schema.num_effects() < 2)
        return schema.name;
    return schema.name + "__o" + std::to_string(action.origin.effect);
}

std::string classical_action_name(const ClassicalTask &task, const ClassicalAction &action) {
    std::string s = "(" + classical_operator_name(task, action);
    for (const auto &arg : task.nd_action(action).args)
        s += " " + arg;
    return s + ")";
}

DeterminizationSet::DeterminizationSet(const GroundTask &task, const DeterminizeOptions &options)
    : task_(&task), options_(options) {
    if (options.cap == 0 && !options.ndp2)
        throw ContractError("determinization cap must be positive (use ndp2 mode for all-outcome only)");

    preference_.resize(task.schemas.size());
    for (std::size_t i = 0; i < task.schemas.size(); ++i) {
        const Schema &schema = task.schemas[i];
        auto &pref = preference_[i];
        pref.resize(schema.num_effects());
        std::iota(pref.begin(), pref.end(), 0U);
        if (options.key == OrderingKey::effect_size) {
            std::stable_sort(pref.begin(), pref.end(), [&](std::uint32_t a, std::uint32_t b) {
                return schema.effect_sizes[a] > schema.effect_sizes[b];
            });
            if (options.ordering == Ordering::ascending)
                std::reverse(pref.begin(), pref.end());
        }
        if (schema.num_effects() >= 2)
            branching_.push_back(i);
    }
    if (options.key == OrderingKey::effect_count) {
        std::stable_sort(branching_.begin(), branching_.end(), [&](std::size_t a, std::size_t b) {
            std::size_t ma = task.schemas[a].num_effects();
            std::size_t mb = task.schemas[b].num_effects();
            return options.ordering == Ordering::descending ? ma > mb : ma < mb;
        });
    }

    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
    for (std::size_t s : branching_) {
        std::size_t m = task.schemas[s].num_effects();
        combinations_ = combinations_ > kMax / m ? kMax : combinations_ * m;
    }
    num_single_ = options.ndp2 ? 0 : std::min(options.cap, combinations_);
    members_.resize(size());
}

std::vector<std::uint32_t> DeterminizationSet::choice(std::size_t index) const {
    if (index >= num_single_)
        throw std::out_of_range("no single-outcome member at index " + std::to_string(index));
    std::vector<std::uint32_t> chosen(task_->schemas.size(), 0);
    for (std::size_t s = 0; s < task_->schemas.size(); ++s)
        chosen[s] = preference_[s].front();
    // Mixed-radix decomposition, first branching schema most significant.
    std::size_t rest = index;
    for (std::size_t j = branching_.size(); j-- > 0;) {
        std::size_t s = branching_[j];
        std::size_t m = task_->schemas[s].num_effects();
        chosen[s] = preference_[s][rest % m];
        rest /= m;
    }
    return chosen;
}

ClassicalTask DeterminizationSet::build(std::size_t index) const {
    ClassicalTask out;
    out.base = task_;
    out.goal_pos = task_->goal_pos;
    out.goal_neg = task_->goal_neg;
    out.all_outcome = is_all_outcome(index);
    auto push = [&](const NdGroundAction &nd, std::uint32_t e) {
        ClassicalAction a;
        a.id = static_cast<ActionId>(out.actions.size());
        a.origin = {nd.id, e};
        a.pre_pos = nd.pre_pos;
        a.pre_neg = nd.pre_neg;
        a.effect = nd.effects[e];
        out.actions.push_back(std::move(a));
    };
    if (out.all_outcome) {
        for (const auto &nd : task_->actions)
            for (std::uint32_t e = 0; e < nd.effects.size(); ++e)
                push(nd, e);
    } else {
        std::vector<std::uint32_t> chosen = choice(index);
        out.choice = chosen;
        for (const auto &nd : task_->actions)
            push(nd, chosen[nd.schema]);
    }
    return out;
}

const ClassicalTask &DeterminizationSet::member(std::size_t index) const {
    if (index >= size())
        throw std::out_of_range("determinization has " + std::to_string(size()) +
                                " members, index " + std::to_string(index) + " requested");
    std::lock_guard lock(mutex_);
    if (!members_[index])
        members_[index] = std::make_unique<ClassicalTask>(build(index));
    return *members_[index];
}

DeterminizationSet compile(const GroundTask &task, const DeterminizeOptions &options) {
    return DeterminizationSet(task, options);
}

}  // namespace fondsp
