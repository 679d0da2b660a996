#pragma once

#include "chaincsg/lar.hpp"

namespace chaincsg {

// Watertight primitive surfaces. Every face is a simple planar polygon whose
// loop runs counterclockwise as seen from outside the solid.

// boundary of the box [0,m]x[0,n]x[0,p] subdivided into unit squares
LarModel cuboid_grid(int m, int n, int p);

// prism on a regular n-gon of radius r, height h centered on z=0; the side
// wall is cut into n planar strips, each subdividing its columns k times
LarModel cylinder_surface(int n, double r, double h, int k);

// latitude-longitude triangulation, n slices around, m stacks pole to pole
LarModel sphere_surface(int n, int m, double r);

}  // namespace chaincsg
