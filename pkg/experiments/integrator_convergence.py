import logging

import numpy as np
from tqdm import tqdm

from relkin.dynamics import FieldConfig, ParticleState, integrate_lorentz
from relkin.io import pickle_save

logger = logging.getLogger(__name__)

# Experiment Settings
FIELD_STRENGTH = 1.0
FINAL_TIME = 2.0
STEPS = [0.2, 0.1, 0.05, 0.025, 0.0125]
SHELL_TOLERANCE = 1e-3


def final_error(step):
    """Relative error of p_x at FINAL_TIME against sinh(E tau) for a start at rest."""
    initial = ParticleState.on_shell(1.0, r=[0, 0, 0], p=[0, 0, 0])
    fields = FieldConfig.uniform_electric([FIELD_STRENGTH, 0, 0])
    final = integrate_lorentz(initial, fields, FINAL_TIME, step, shell_tolerance=SHELL_TOLERANCE)[-1]
    exact = np.sinh(FIELD_STRENGTH * FINAL_TIME)
    return abs(final.p[0] - exact) / exact


def run(steps):
    return np.array([final_error(step) for step in tqdm(steps)])


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
    errors = run(STEPS)
    order = np.polyfit(np.log(STEPS), np.log(errors), 1)[0]
    logger.info('observed order %.3f', order)
    pickle_save('../results/integrator_convergence/errors.pk', (np.array(STEPS), errors))
