#pragma once

#include "xclass/classifier.hpp"

namespace xclass {

// Raw state access for serialization; M is XClassModel or const XClassModel.
struct ModelAccess {
    template <class M> static auto& config(M& m) { return m.cfg_; }
    template <class M> static auto& schema(M& m) { return m.schema_; }
    template <class M> static auto& stats(M& m) { return m.stats_; }
    template <class M> static auto& frame(M& m) { return m.frame_; }
    template <class M> static auto& classes(M& m) { return m.classes_; }
    template <class M> static auto& tracker(M& m) { return m.tracker_; }
    template <class M> static auto& buffer(M& m) { return m.buffer_; }
    template <class M> static auto& seq(M& m) { return m.seq_; }
    template <class M> static auto& next_label(M& m) { return m.next_label_; }
    template <class M> static auto& released(M& m) { return m.released_; }
};

}  // namespace xclass
