import logging

import numpy as np
from tqdm import trange

from relkin.io import pickle_save
from relkin.kinematics import momenta_from_counter_rapidity
from relkin.spinor import weyl_limit_residuals

logger = logging.getLogger(__name__)

# Experiment Settings
PI0 = 1.0
MASSES = np.logspace(-6, -1, 26)
DIRECTION = np.array([0.0, 0.0, 1.0])


def experiment_step(mass):
    state = momenta_from_counter_rapidity(mass, phi=1.0 / PI0)
    return [state.p0 - PI0, state.p - PI0], list(weyl_limit_residuals(mass, PI0, DIRECTION))


def fitted_order(masses, gaps):
    """log-log slope of |gap| against the mass"""
    return np.polyfit(np.log(masses), np.log(np.abs(gaps)), 1)[0]


def run(masses):
    energy_gaps, eigenvalue_gaps = [], []
    for i in trange(len(masses)):
        energy_gap, eigenvalue_gap = experiment_step(masses[i])
        energy_gaps.append(energy_gap)
        eigenvalue_gaps.append(eigenvalue_gap)
    return np.array(energy_gaps), np.array(eigenvalue_gaps)


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
    energy_gaps, eigenvalue_gaps = run(MASSES)
    logger.info('P0 order %.3f, P order %.3f', fitted_order(MASSES, energy_gaps[:, 0]),
                fitted_order(MASSES, energy_gaps[:, 1]))
    logger.info('split eigenvalue orders %.3f, %.3f', fitted_order(MASSES, eigenvalue_gaps[:, 0]),
                fitted_order(MASSES, eigenvalue_gaps[:, 1]))
    pickle_save('../results/massless_limit/gaps.pk', (MASSES, energy_gaps, eigenvalue_gaps))
