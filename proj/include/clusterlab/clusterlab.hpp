#pragma once

#include "clusterlab/apollonian.hpp"
#include "clusterlab/area_spec.hpp"
#include "clusterlab/boundary_mesh.hpp"
#include "clusterlab/cantor.hpp"
#include "clusterlab/cluster.hpp"
#include "clusterlab/double_bubble.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/fractional.hpp"
#include "clusterlab/geometry.hpp"
#include "clusterlab/grid.hpp"
#include "clusterlab/json_io.hpp"
#include "clusterlab/manifest.hpp"
#include "clusterlab/marching_squares.hpp"
#include "clusterlab/minimizer.hpp"
#include "clusterlab/norm.hpp"
#include "clusterlab/random.hpp"
#include "clusterlab/region.hpp"
#include "clusterlab/report.hpp"
#include "clusterlab/square_gasket.hpp"
#include "clusterlab/svg.hpp"
