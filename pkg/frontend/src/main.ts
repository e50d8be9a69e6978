import { ApiClient } from "./api.js";
import { SearchController } from "./controller.js";
import { createLayout } from "./view.js";

document.addEventListener("DOMContentLoaded", () => {
  const mount = document.getElementById("app");
  if (!mount) throw new Error("missing #app mount point");
  const layout = createLayout();
  mount.appendChild(layout);
  new SearchController(layout, new ApiClient());
});
