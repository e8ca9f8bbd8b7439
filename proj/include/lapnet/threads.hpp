#pragma once

namespace lapnet {

/// Applies LAPNET_THREADS (if set to a positive integer) as the OpenMP
/// thread cap. Returns the resulting maximum thread count.
int configure_threads();

}  // namespace lapnet
