#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "omni/core.hpp"
#include "omni/error.hpp"

namespace omni {

struct CurriculumConfig {
    double ema_beta = 0.1;
    double reweight_theta = 0.1;
    double boring_multiplier = 0.001;
    int eval_frequency_updates = 10;
    int eval_episodes = 32;
    int random_episodes = 256;
    bool normalize_to_random = true;
    double alpha = 0.2;

    void validate() const {
        if (!(ema_beta > 0.0 && ema_beta <= 1.0))
            throw PreconditionError("ema_beta must lie in (0,1]");
        if (!(reweight_theta > 0.0 && reweight_theta < 0.5))
            throw PreconditionError("reweight_theta must lie in (0,0.5)");
        if (!(boring_multiplier > 0.0))
            throw PreconditionError("boring_multiplier must be positive");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw PreconditionError("alpha must lie in [0,1]");
        if (eval_frequency_updates < 1 || eval_episodes < 1 || random_episodes < 1)
            throw PreconditionError("counts must be positive");
    }
};

namespace detail {
inline void require_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw PreconditionError(std::string(what) + " outside [0,1]");
}
}  // namespace detail

// f(p) = (1-theta) p / (p + theta (1 - 2p)); spreads out small probabilities.
inline double reweight(double p, double theta) {
    detail::require_prob(p, "p");
    if (!(theta > 0.0 && theta < 0.5)) throw PreconditionError("theta outside (0,0.5)");
    const double den = p + theta * (1.0 - 2.0 * p);
    return std::clamp((1.0 - theta) * p / den, 0.0, 1.0);
}

inline double normalize_success(double t_eval, double t_rdn, bool enabled) {
    detail::require_prob(t_eval, "t_eval");
    detail::require_prob(t_rdn, "t_rdn");
    if (!enabled) return t_eval;
    if (t_rdn >= 1.0 - 1e-9) return 0.0;
    return std::clamp((t_eval - t_rdn) / (1.0 - t_rdn), 0.0, 1.0);
}

inline double ema_update(double prev, double obs, double beta) {
    const double v = obs * beta + prev * (1.0 - beta);
    return std::clamp(v, std::min(prev, obs), std::max(prev, obs));
}

inline double learning_progress(double p_recent, double p_gradual, double theta) {
    return std::abs(reweight(p_recent, theta) - reweight(p_gradual, theta));
}

struct TaskEstimate {
    TaskId id;
    double t_rdn = 0.0;
    double p_recent = 0.0;
    double p_gradual = 0.0;
    double lp = 0.0;
    bool initialized = false;
};

// Tasks kept in insertion order; new tasks may be appended at any time
// (infinite task spaces grow the set between evaluations).
class CurriculumState {
public:
    explicit CurriculumState(CurriculumConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

    const CurriculumConfig& config() const noexcept { return cfg_; }
    const std::vector<TaskEstimate>& tasks() const noexcept { return tasks_; }
    std::size_t size() const noexcept { return tasks_.size(); }

    bool contains(const TaskId& id) const { return index_.count(id) != 0; }

    void add_task(const TaskId& id, double t_rdn = 0.0) {
        detail::require_prob(t_rdn, "t_rdn");
        if (contains(id)) throw PreconditionError("duplicate task " + id.str());
        index_.emplace(id, tasks_.size());
        tasks_.push_back(TaskEstimate{id, t_rdn});
    }

    const TaskEstimate& at(const TaskId& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw PreconditionError("unknown task " + id.str());
        return tasks_[it->second];
    }

    std::vector<TaskId> ids() const {
        std::vector<TaskId> out;
        out.reserve(tasks_.size());
        for (const auto& t : tasks_) out.push_back(t.id);
        return out;
    }

    std::vector<double> lp() const {
        std::vector<double> out;
        out.reserve(tasks_.size());
        for (const auto& t : tasks_) out.push_back(t.lp);
        return out;
    }

    friend CurriculumState record_evaluation(CurriculumState state,
                                             const std::unordered_map<TaskId, double>& t_eval);

private:
    CurriculumConfig cfg_;
    std::vector<TaskEstimate> tasks_;
    std::unordered_map<TaskId, std::size_t> index_;
};

inline CurriculumState record_evaluation(CurriculumState state,
                                         const std::unordered_map<TaskId, double>& t_eval) {
    const auto& c = state.cfg_;
    for (auto& t : state.tasks_) {
        auto it = t_eval.find(t.id);
        if (it == t_eval.end())
            throw IncompleteEvaluationError("no evaluation for task " + t.id.str());
        const double x = normalize_success(it->second, t.t_rdn, c.normalize_to_random);
        if (!t.initialized) {
            t.p_recent = x;
            t.p_gradual = x;
            t.initialized = true;
        } else {
            t.p_recent = ema_update(t.p_recent, x, c.ema_beta);
            t.p_gradual = ema_update(t.p_gradual, t.p_recent, c.ema_beta);
        }
        t.lp = learning_progress(t.p_recent, t.p_gradual, c.reweight_theta);
    }
    return state;
}

struct SamplingDistribution {
    std::vector<TaskId> ids;
    std::vector<double> weights;

    std::size_t size() const noexcept { return ids.size(); }

    double weight_of(const TaskId& id) const {
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == id) return weights[i];
        throw PreconditionError("task not in distribution: " + id.str());
    }

    std::size_t argmax() const {
        return static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) - weights.begin());
    }
};

inline SamplingDistribution uniform_distribution(std::vector<TaskId> ids) {
    if (ids.empty()) throw PreconditionError("empty task set");
    const double w = 1.0 / static_cast<double>(ids.size());
    std::vector<double> ws(ids.size(), w);
    return {std::move(ids), std::move(ws)};
}

inline SamplingDistribution weights_from_lp(std::vector<TaskId> ids, const std::vector<double>& lp) {
    if (ids.empty()) throw PreconditionError("empty task set");
    if (ids.size() != lp.size()) throw PreconditionError("ids/lp size mismatch");
    const double n = static_cast<double>(lp.size());
    double mean = 0.0;
    for (double v : lp) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : lp) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);
    if (sd < 1e-12) return uniform_distribution(std::move(ids));

    std::vector<double> w(lp.size());
    double total = 0.0;
    for (std::size_t i = 0; i < lp.size(); ++i) {
        const double z = (lp[i] - mean) / sd;
        w[i] = 1.0 / (1.0 + std::exp(-z));
        total += w[i];
    }
    for (double& x : w) x /= total;
    return {std::move(ids), std::move(w)};
}

inline SamplingDistribution weights_from_lp(const CurriculumState& s) {
    return weights_from_lp(s.ids(), s.lp());
}

inline SamplingDistribution compose_with_interest(const SamplingDistribution& d,
                                                  const std::unordered_map<TaskId, bool>& interesting,
                                                  double multiplier) {
    if (!(multiplier > 0.0)) throw PreconditionError("multiplier must be positive");
    SamplingDistribution out = d;
    double total = 0.0;
    for (std::size_t i = 0; i < out.ids.size(); ++i) {
        auto it = interesting.find(out.ids[i]);
        if (it == interesting.end())
            throw PreconditionError("no verdict for task " + out.ids[i].str());
        if (!it->second) out.weights[i] *= multiplier;
        total += out.weights[i];
    }
    for (double& w : out.weights) w /= total;
    return out;
}

inline SamplingDistribution compose_with_interest(const SamplingDistribution& d,
                                                  const std::vector<InterestVerdict>& verdicts,
                                                  double multiplier) {
    std::unordered_map<TaskId, bool> m;
    for (const auto& v : verdicts) m[v.task] = v.interesting;
    return compose_with_interest(d, m, multiplier);
}

// Precomputed CDF for repeated draws from one distribution.
class CdfSampler {
public:
    explicit CdfSampler(const SamplingDistribution& d) : cdf_(d.weights.size()) {
        if (d.weights.empty()) throw PreconditionError("empty distribution");
        double acc = 0.0;
        for (std::size_t i = 0; i < d.weights.size(); ++i) {
            acc += d.weights[i];
            cdf_[i] = acc;
        }
    }

    std::size_t operator()(Rng& rng) const {
        const double u = uniform01(rng) * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) --it;
        return static_cast<std::size_t>(it - cdf_.begin());
    }

private:
    std::vector<double> cdf_;
};

inline TaskId sample_task(const SamplingDistribution& d, Rng& rng) {
    return d.ids[CdfSampler(d)(rng)];
}

// One line per task: id, t_rdn, p_recent, p_gradual, lp, weight (tab separated).
inline std::string snapshot_record(const CurriculumState& s, const SamplingDistribution& d) {
    std::map<TaskId, double> w;
    for (std::size_t i = 0; i < d.ids.size(); ++i) w[d.ids[i]] = d.weights[i];
    std::ostringstream os;
    char buf[256];
    for (const auto& t : s.tasks()) {
        auto it = w.find(t.id);
        std::snprintf(buf, sizeof buf, "\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\n", t.t_rdn, t.p_recent,
                      t.p_gradual, t.lp, it == w.end() ? 0.0 : it->second);
        os << t.id.str() << buf;
    }
    return os.str();
}

}  // namespace omni
