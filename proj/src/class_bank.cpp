// SPDX-License-Identifier: Apache-2.0
#include "vassoc/class_bank.hpp"

#include "vassoc/assignment.hpp"
#include "vassoc/error.hpp"

#include <cmath>
#include <string>

namespace vassoc {

ClassQueryBank::ClassQueryBank(std::size_t n_q, double momentum) : n_q_(n_q), momentum_(momentum) {
    if (n_q == 0) {
        throw Error(Errc::invalid_count, "queue length must be at least 1");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw Error(Errc::invalid_argument, "momentum must lie in [0, 1)");
    }
}

void ClassQueryBank::check_dim(std::size_t n) {
    if (n == 0) {
        throw Error(Errc::dimension_mismatch, "empty embedding");
    }
    if (dim_ == 0) {
        dim_ = n;
    } else if (n != dim_) {
        throw Error(Errc::dimension_mismatch,
                    "embedding has " + std::to_string(n) + " entries, bank holds " + std::to_string(dim_));
    }
}

void ClassQueryBank::update(int class_id, std::span<const double> embedding, std::optional<std::size_t> source_index) {
    check_dim(embedding.size());
    auto& queue = queues_[class_id];
    if (queue.size() == n_q_) {
        queue.pop_front();
    }
    queue.push_back({Vec(embedding.begin(), embedding.end()), source_index});

    auto [it, inserted] = prototypes_.try_emplace(class_id, Vec(embedding.begin(), embedding.end()));
    if (!inserted) {
        for (std::size_t k = 0; k < dim_; ++k) {
            it->second[k] = momentum_ * it->second[k] + (1.0 - momentum_) * embedding[k];
        }
    }
}

void ClassQueryBank::restore_class(int class_id, std::deque<Entry> queue, Vec prototype) {
    if (queue.size() > n_q_) {
        throw Error(Errc::invalid_count, "checkpointed queue exceeds the queue length");
    }
    check_dim(prototype.size());
    for (const auto& e : queue) {
        check_dim(e.embedding.size());
    }
    queues_[class_id] = std::move(queue);
    prototypes_[class_id] = std::move(prototype);
}

int ClassQueryBank::nearest_class(std::span<const double> embedding) const {
    if (prototypes_.empty()) {
        throw Error(Errc::missing_bank, "no class prototypes to match against");
    }
    if (embedding.size() != dim_) {
        throw Error(Errc::dimension_mismatch, "embedding length differs from the bank's");
    }
    int best = prototypes_.begin()->first;
    double best_score = -2.0;
    for (const auto& [cls, proto] : prototypes_) {
        const double s = cosine(embedding, proto);
        if (s > best_score) {
            best_score = s;
            best = cls;
        }
    }
    return best;
}

} // namespace vassoc
