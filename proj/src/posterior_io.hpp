#pragma once

#include "sbdae/posterior.hpp"
#include "text_io.hpp"

namespace sbdae::detail {

/// Reads one `sbdae-posterior v1` block, leaving the stream after it.
Posterior read_posterior_block(TokenReader &r);

}  // namespace sbdae::detail
