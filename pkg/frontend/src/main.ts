import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { ClientSession } from "./session.js";

const root = document.getElementById("app");
if (root) {
  const app = new App(root, new ApiClient(""), new ClientSession());
  void app.start();
}
