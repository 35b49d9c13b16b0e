import { PredictionClient } from "./api.js";
import { Keyboard, loadConfig } from "./keyboard.js";

async function boot(): Promise<void> {
  const config = await loadConfig("./config.json");
  const root = document.getElementById("keyboard");
  if (!root) throw new Error("missing #keyboard mount point");
  const client = new PredictionClient(config.serviceUrl);
  const keyboard = new Keyboard(root, config, client);
  (window as unknown as { keyboard: Keyboard }).keyboard = keyboard;
}

void boot();
