// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/feature_map.hpp"

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <span>

namespace vassoc {

inline constexpr std::size_t kDefaultQueueLength = 100;
inline constexpr double kDefaultMomentum = 0.99;

/// Per-class FIFO queues of stuff embeddings plus a momentum-averaged
/// prototype per class. Single writer; copy to take a snapshot.
class ClassQueryBank {
public:
    struct Entry {
        Vec embedding;
        /// Index of the record this embedding came from, when known.
        std::optional<std::size_t> source_index;
    };

    explicit ClassQueryBank(std::size_t n_q = kDefaultQueueLength, double momentum = kDefaultMomentum);

    std::size_t n_q() const noexcept { return n_q_; }
    double momentum() const noexcept { return momentum_; }
    /// Embedding dimension, 0 until the first update.
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return queues_.empty(); }

    const std::map<int, std::deque<Entry>>& queues() const noexcept { return queues_; }
    const std::map<int, Vec>& prototypes() const noexcept { return prototypes_; }

    /// Pushes onto the class queue (evicting the oldest entry when full) and
    /// moves the prototype: p <- m * p + (1 - m) * e, seeded with the first
    /// embedding seen for the class.
    void update(int class_id, std::span<const double> embedding, std::optional<std::size_t> source_index = {});

    /// Restores a checkpointed class verbatim (queue oldest-first).
    void restore_class(int class_id, std::deque<Entry> queue, Vec prototype);

    /// Class whose prototype has the highest cosine with `embedding`; ties go
    /// to the smallest class id. Throws MissingBank when no prototype exists.
    int nearest_class(std::span<const double> embedding) const;

private:
    void check_dim(std::size_t n);

    std::size_t n_q_;
    double momentum_;
    std::size_t dim_ = 0;
    std::map<int, std::deque<Entry>> queues_;
    std::map<int, Vec> prototypes_;
};

} // namespace vassoc
