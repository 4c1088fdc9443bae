import { ApiClient } from './api';
import { renderWizard } from './app';

const root = document.getElementById('app');
if (root) {
  renderWizard(root, new ApiClient(''));
}
