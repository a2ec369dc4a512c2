import numpy as np
import matplotlib.pyplot as plt
from spavs.simulator import spatial_weight_grid

n = 24
fig, ax = plt.subplots(1, 3, figsize=(14, 4))
for axis, a in zip(ax, [2, 25, np.inf]):
    im = axis.imshow(spatial_weight_grid(n, a), origin='lower', vmin=0, vmax=1,
                     extent=(0.5, n + 0.5, 0.5, n + 0.5))
    axis.set_title(r'$D_{{(i,j)}}$, $a={}$'.format(a))
fig.colorbar(im, ax=ax.tolist())
