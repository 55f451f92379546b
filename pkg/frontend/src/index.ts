export * from "./canonical.js";
export * from "./channel.js";
export * from "./codec.js";
export * from "./content.js";
export * from "./crc32.js";
export * from "./guest.js";
export * from "./locale.js";
export * from "./pairing-ui.js";
export * from "./qr.js";
export * from "./seed-param.js";
export * from "./snapshot.js";
export * from "./view.js";
export * from "./wire.js";
