from django.dispatch import Signal

# Sent with sender=Particle after a particle is placed (iteration 0) or moved.
# Keyword arguments: particle, iteration, index, layout, vmax (per-zone caps).
particle_moved = Signal()
